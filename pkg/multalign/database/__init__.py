# Licensed under the MIT License.
"""Results store for experiment records"""
