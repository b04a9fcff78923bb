# Initialize services package
