"""Tests for holdermap."""
