"""mavdet - Training-free MAV detection from moving event cameras."""

__version__ = "0.1.0"
