"""Golden quantum LDPC codes from the {4,3,3,5} hyperbolic tessellation.

Pipeline: exact Z[phi] arithmetic (`arith`), hyperboloid geometry and
Coxeter generators (`geometry`), finite quotient groups (`group`), coset
tessellations (`tessellation`), CSS codes and exports (`chain`), local
decoders (`decoders`), non-minimality lemma checks (`lemmas`) and the
command-line front end (`cli`).
"""

__version__ = "0.1.0"
