from .csr import CsrMatrix
from .scaling import CommonRangeScaler, FeatureBlock, FrozenTransform, scale_to_common_range
from .svd import SvdFactors, project, truncated_svd, variance_explained

__all__ = [
    "CsrMatrix",
    "CommonRangeScaler",
    "FeatureBlock",
    "FrozenTransform",
    "SvdFactors",
    "project",
    "scale_to_common_range",
    "truncated_svd",
    "variance_explained",
]
