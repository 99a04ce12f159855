# Exit codes shared by every subcommand
EXIT_OK = 0
EXIT_INCOMPATIBLE = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 64
EXIT_PARSE = 65

COMMANDS = ["check", "search", "bound", "oracle", "export-smt"]

# Shapes in the order the progressive strategy tries them
SHAPE_ORDER = ["additive", "linear", "simple", "quadratic", "simple-quadratic"]

STRATEGIES = ["blind", "progressive", "pattern"]

RELATIONS = ["innermost", "full"]

START_TERMS = ["basic", "ground"]

# Rational literals in interpretation files may only use these denominators
ALLOWED_DENOMINATORS = [1, 2]
