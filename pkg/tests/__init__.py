"""Tests for snake.asymmetric."""
