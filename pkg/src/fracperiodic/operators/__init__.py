from fracperiodic.operators.spectral import SpectralOperator, apply_spectral, fractional_laplacian
from fracperiodic.operators.quadrature import QuadratureOperator, apply_quadrature
from fracperiodic.operators.forms import bilinear_form, gagliardo_quadrature
from fracperiodic.operators.convexity import ConvexFunction, convexity_inequality_check
