"""wicklab: a computational-probability laboratory.

Layers:

* ``laws``       -- exact moment sequences and samplers for the law catalog
* ``wick``       -- Wick-polynomial calculus over arbitrary moment sequences
* ``rademacher`` -- generalized Rademacher systems and CDF transport
* ``discrete``   -- independence on finite probability spaces
* ``chaos``      -- truncated non-Gaussian chaos calculus and the stochastic
                    integral with its identities and experiments
* ``cli``        -- reproduction harness emitting machine-readable reports
"""

__version__ = "0.1.0"
