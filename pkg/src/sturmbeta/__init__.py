"""Sturmian words, beta-expansions and Sturmian numbers with certified arithmetic."""
