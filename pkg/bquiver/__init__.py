from bquiver.forest_utils import Forest, ForestSum, Leaf, Node, format_forest, parse_forest
from bquiver.word_utils import WordPoly, pi
from bquiver.orbit_utils import BOrbit, delta, parse_borbit
from bquiver.align_utils import AlignmentClass, F, classify, render_forest
from bquiver.quiver_utils import build_quiver, iota, path_of
from bquiver.relation_utils import kernel_I, verify_conjecture

__version__ = '0.1'
