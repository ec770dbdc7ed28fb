"""Constants for the koszulkit computer-algebra engine."""
from typing import Final

DOMAIN: Final = "koszulkit"

# Job configuration keys
CONF_COMMAND = "command"
CONF_FIELD = "field"
CONF_ORDER = "order"
CONF_SEED = "seed"
CONF_THREADS = "threads"
CONF_MAX_BASIS = "max_basis"
CONF_FORMAT = "format"
CONF_OUT = "out"
CONF_INPUTS = "inputs"
CONF_VERBOSE = "verbose"

# Module description keys (text and JSON formats)
CONF_VARS = "vars"
CONF_WEIGHTS = "weights"
CONF_SHIFTS = "shifts"
CONF_RELATIONS = "relations"

# Point configuration keys
CONF_AMBIENT = "ambient"
CONF_POINTS = "points"
CONF_SECTIONS = "sections"
CONF_DEGREE = "degree"
CONF_SCHEMES = "schemes"
CONF_KIND = "kind"
CONF_POINT = "point"
CONF_FORM = "form"
CONF_GERM = "germ"
CONF_LENGTH = "length"
CONF_ORDER_OF_VANISHING = "order"

# Defaults
DEFAULT_FIELD = "qq"
DEFAULT_ORDER = "grevlex"
DEFAULT_SEED = 0
DEFAULT_THREADS = 1
DEFAULT_MAX_BASIS = 20000
DEFAULT_FORMAT = "text"
DEFAULT_PRIME = 65521  # largest prime below 2^16
DEFAULT_SAMPLE_TRIALS = 20
DEFAULT_P_MAX = 3

# Scalar fields and orders
FIELD_RATIONALS = "qq"
FIELD_PRIME_PREFIX = "fp:"
ORDER_GREVLEX = "grevlex"
ORDER_LEX = "lex"
ORDER_BLOCK = "block"
ORDERS = [ORDER_GREVLEX, ORDER_LEX, ORDER_BLOCK]
MAX_PRIME = 2 * 10**9

# Output formats
FORMAT_TEXT = "text"
FORMAT_JSON = "json"
FORMAT_CSV = "csv"
FORMATS = [FORMAT_TEXT, FORMAT_JSON, FORMAT_CSV]

# Polygraph guards
MAX_POLYGRAPH_FUNCTIONS = 4096
DEFAULT_MAX_N = 3
DEFAULT_MAX_K = 2
DEFAULT_STABILIZATION_CAP = 6
STABILIZATION_LOOKAHEAD = 2

# Verdicts
VERDICT_EXT_ZERO = "ext-zero"
VERDICT_INVARIANTS_ZERO = "invariants-zero"
VERDICT_INVARIANTS_NONZERO = "invariants-nonzero"
VERDICTS = [VERDICT_EXT_ZERO, VERDICT_INVARIANTS_ZERO, VERDICT_INVARIANTS_NONZERO]

CERTIFIED_NONZERO = "certified-nonzero"
HYPOTHESES_FAIL = "hypotheses-fail"
CERTIFIED = "certified"
NOT_CERTIFIED = "not-certified"

LABEL_PROVED = "proved"
LABEL_SAMPLED = "sampled"

STRATEGY_EXHAUSTIVE = "exhaustive-divisors"
STRATEGY_SAMPLED = "sampled"

# Scheme kinds
SCHEME_REDUCED_POINTS = "reduced-points"
SCHEME_DIVISOR = "divisor-on-line"
SCHEME_JET = "jet"
SCHEME_FAT_POINT = "fat-point"
SCHEME_KINDS = [SCHEME_REDUCED_POINTS, SCHEME_DIVISOR, SCHEME_JET, SCHEME_FAT_POINT]

# Characters
CHARACTER_TRIVIAL = "trivial"
CHARACTER_SIGN = "sign"

# Verify levels
LEVEL_FAST = "fast"
LEVEL_FULL = "full"
LEVELS = [LEVEL_FAST, LEVEL_FULL]
MIN_CORPUS_SIZE = 20
MIN_CERTIFICATE_INSTANCES = 10
DETERMINISM_THREADS = (1, 8)

# Exit codes
EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_RESOURCE_GUARD = 2
EXIT_INTERNAL = 3

# Error messages
ERROR_RING_MISMATCH = "Operands belong to different rings"
ERROR_NOT_GROEBNER = "Basis is not marked as a Groebner basis"
ERROR_INHOMOGENEOUS = "Input is not homogeneous"
ERROR_BASIS_LIMIT = "Groebner basis exceeded the configured size limit"
ERROR_RESOLUTION_LENGTH = "Resolution did not terminate within the length limit"
ERROR_EMPTY_IDEAL_LIST = "Cannot intersect an empty list of ideals"
ERROR_BAD_POLYNOMIAL = "Invalid polynomial expression"
ERROR_UNKNOWN_VARIABLE = "Unknown variable"
ERROR_BAD_FIELD = "Invalid scalar field"
ERROR_DEGREE_ONE = "V basis elements must be homogeneous of degree 1"
ERROR_NOT_SUBMODULE = "Generator is not an element of the ambient module"
ERROR_ACTION = "Group action does not preserve the relations"
ERROR_CHARACTERISTIC = "Field characteristic divides the group order"
ERROR_GUARD = "Polygraph size guard exceeded"
ERROR_STABILIZATION = "Presentation did not stabilize below the degree cap"
ERROR_CERTIFICATE = "Internal certificate check failed"
ERROR_PRECONDITION = "Numeric precondition violated"
ERROR_SCHEME = "Scheme is not contained in the domain of the sections"

# Configuration schemas
import voluptuous as vol  # noqa: E402


def _field_string(value):
    """Accept 'qq' or 'fp:P' with an integer P."""
    text = str(value).strip().lower()
    if text == FIELD_RATIONALS:
        return text
    if text.startswith(FIELD_PRIME_PREFIX) and text[len(FIELD_PRIME_PREFIX):].isdigit():
        return text
    raise vol.Invalid(f"{ERROR_BAD_FIELD}: {value}")


JOB_SCHEMA = vol.Schema({
    vol.Required(CONF_COMMAND): str,
    vol.Optional(CONF_FIELD, default=DEFAULT_FIELD): _field_string,
    vol.Optional(CONF_ORDER, default=DEFAULT_ORDER): vol.In(ORDERS),
    vol.Optional(CONF_SEED, default=DEFAULT_SEED): vol.All(int, vol.Range(min=0, max=2**64 - 1)),
    vol.Optional(CONF_THREADS, default=DEFAULT_THREADS): vol.All(int, vol.Range(min=1)),
    vol.Optional(CONF_MAX_BASIS, default=DEFAULT_MAX_BASIS): vol.All(int, vol.Range(min=1)),
    vol.Optional(CONF_FORMAT, default=DEFAULT_FORMAT): vol.In(FORMATS),
    vol.Optional(CONF_OUT, default=None): vol.Any(None, str),
    vol.Optional(CONF_VERBOSE, default=False): bool,
}, extra=vol.ALLOW_EXTRA)

MODULE_SCHEMA = vol.Schema({
    vol.Required(CONF_VARS): vol.All([str], vol.Length(min=1)),
    vol.Optional(CONF_WEIGHTS, default=None): vol.Any(None, [vol.All(int, vol.Range(min=1))]),
    vol.Optional(CONF_SHIFTS, default=[0]): vol.All([int], vol.Length(min=1)),
    vol.Optional(CONF_RELATIONS, default=[]): [[str]],
})

_COORDINATES = vol.All([vol.Any(int, str)], vol.Length(min=1))

SCHEME_SCHEMA = vol.Schema({
    vol.Required(CONF_KIND): vol.In(SCHEME_KINDS),
    vol.Optional(CONF_POINTS): [_COORDINATES],
    vol.Optional(CONF_FORM): str,
    vol.Optional(CONF_POINT): _COORDINATES,
    vol.Optional(CONF_GERM): [_COORDINATES],
    vol.Optional(CONF_LENGTH): vol.All(int, vol.Range(min=1)),
    vol.Optional(CONF_ORDER_OF_VANISHING): vol.All(int, vol.Range(min=1)),
})

POINTS_SCHEMA = vol.Schema({
    vol.Required(CONF_AMBIENT): vol.All(int, vol.Range(min=1)),
    vol.Optional(CONF_DEGREE, default=1): vol.All(int, vol.Range(min=0)),
    vol.Optional(CONF_SECTIONS, default=None): vol.Any(None, [str]),
    vol.Optional(CONF_POINTS, default=[]): [_COORDINATES],
    vol.Optional(CONF_SCHEMES, default=[]): [SCHEME_SCHEMA],
})

_DEGREE_TABLE = [vol.ExactSequence([int, vol.All(int, vol.Range(min=0))])]

EXT_REPORT_SCHEMA = vol.Schema({
    vol.Required("n"): vol.All(int, vol.Range(min=1)),
    vol.Required("k"): vol.All(int, vol.Range(min=0)),
    vol.Required("j"): vol.All(int, vol.Range(min=0)),
    vol.Required("verdict"): vol.In(VERDICTS),
    vol.Required("witness_degree"): vol.Any(None, int),
    vol.Required("window"): vol.Any(None, vol.ExactSequence([int, int])),
    vol.Required("generator_degrees"): [int],
    vol.Required("relation_degrees"): [int],
    vol.Required("dimensions"): _DEGREE_TABLE,
    vol.Required("invariant_dimensions"): _DEGREE_TABLE,
    vol.Required("resolution_ranks"): [vol.All(int, vol.Range(min=0))],
})

# Subcommands
COMMAND_GB = "gb"
COMMAND_ELIMINATE = "eliminate"
COMMAND_INTERSECT = "intersect"
COMMAND_RESOLVE = "resolve"
COMMAND_BETTI = "betti"
COMMAND_KOSZUL = "koszul"
COMMAND_SECTIONS = "sections"
COMMAND_AMPLE = "ample"
COMMAND_CURVE_BOUND = "curve-bound"
COMMAND_POLYGRAPH = "polygraph"
COMMAND_REPORT = "report"
COMMAND_VERIFY = "verify"
