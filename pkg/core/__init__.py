"""Core domain models and the shared error hierarchy."""
