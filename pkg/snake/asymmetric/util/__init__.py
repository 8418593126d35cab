# Output helpers
