// the report accumulator is header-only
