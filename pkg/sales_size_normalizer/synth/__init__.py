"""
Synth package - synthetic sales with known ground-truth normalization.
"""

from sales_size_normalizer.synth.generator import GroundTruth, SynthConfig, generate

__all__ = ['GroundTruth', 'SynthConfig', 'generate']
