"""
semcont - semantic continuity of saliency-map explainers.

Generates controlled semantic variations of synthetic shape images, trains a
micro-CNN on them, explains its predictions with RISE, LIME, KernelSHAP and
GradCAM, and measures whether explanation distances grow monotonically with
the variation (or with the model's confidence change).
"""

__version__ = "0.1.0"
