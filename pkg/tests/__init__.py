"""Tests for GoodToMerge."""
