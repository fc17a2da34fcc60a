"""
Domain services: signal processing, features, deep-clustering objective,
Multilayer Bootstrap Networks, separation, metrics and simulation.
"""
