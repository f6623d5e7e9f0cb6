# Models package
from .weight_model import Weight
from .level_model import Level
from .root_system_model import RootSystem
from .affine_weight_model import AffineWeight
from .chain_model import BlockQuery, StarChain, StarStep, StepConvention
from .verma_model import PBWMonomial, ShapovalovReport
