# Licensed under the MIT License.
"""
Multimodal network alignment via low-rank similarity factors
"""

__version__ = "0.1.0"
