# satlink-dtn - satellite-constrained DTN simulator
__version__ = "1.0.0"
