"""Test suite for the orthant walk asymptotics toolkit."""
