"""Vessel segmentation metrics.

Volumes are numpy arrays indexed ``[z, y, x]``; spacings are ``(dx, dy, dz)`` in mm.
"""

from ._core import (
    VesselError,
    apply_liver_mask,
    area_measure,
    boundary,
    cldice,
    connected_components,
    dilate,
    dilation_sweep,
    dsc,
    erode,
    evaluate_case,
    evaluate_multiclass,
    gen_capsule,
    gen_tree,
    iou,
    keep_largest_per_class,
    length_measure,
    nsd,
    rank_task1,
    rank_task2,
    read_nifti,
    resample_nearest,
    skeletonize,
    squared_edt,
    write_nifti,
)

__version__ = "0.1.0"
__all__ = [name for name in dir() if not name.startswith("_")]
