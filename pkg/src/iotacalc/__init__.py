"""Definite descriptions in first- and second-order logic: syntax, semantics, proofs."""
