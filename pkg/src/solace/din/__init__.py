"""Differential interaction nets: cells, rules, reduction, isomorphism and compound cells."""
