"""
Document collectors answering keyword queries.
"""

from keyword_tracker.keywords.collectors.collector import CollectorPort
from keyword_tracker.keywords.collectors.file_collector import FileCollector
from keyword_tracker.keywords.collectors.simulated_collector import SimulatedCollector

__all__ = ["CollectorPort", "FileCollector", "SimulatedCollector"]
