from fracperiodic.space.fields import FracOrder, SpectralField, GridField, PeriodicField, to_grid, from_grid
from fracperiodic.space.exponents import critical_exponent, is_subcritical, bootstrap_chain, ExponentChain
from fracperiodic.space.norms import inner_product_X, norm_X, norm_X_squared, gagliardo_part
