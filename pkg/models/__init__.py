"""Domain models: spaces, set families, count and value laws, fields, moments and estimation."""
