import random
import unittest
from fractions import Fraction

from bquiver.align_utils import (AlignmentClass, F, NotComparable, NotEvenLength, NotOddLength, NotRightAligned,
                                 ShapeMismatch, classify, even_align, forest_prec, odd_align, render_forest,
                                 render_unlabeled, strong_align, tree_less)
from bquiver.forest_utils import Forest, Leaf, Node, composition_forest, erase, parse_forest, parse_tree
from bquiver.orbit_utils import BOrbit, delta
from bquiver.relation_utils import render_orbits
from bquiver.word_utils import pi

from tests.test_forest_utils import random_tree
from tests.test_orbit_utils import random_labeling

SEED = 777

# the forests related to the first one, in increasing order; U = (1 (1 2)), V = (2 (1 2)) and their mirrors
ORDER_EXAMPLE = [
    '(1 ((1 (1 2)) (2 (1 2)))) (1 (1 4)) (1 (1 5))',
    '(1 ((1 (1 2)) ((2 1) 2))) (1 (1 4)) (1 (1 5))',
    '(1 ((1 (1 2)) 5)) (1 (1 4)) (1 (1 (2 (1 2))))',
    '(1 ((1 (1 2)) 5)) (1 (1 4)) (1 (1 ((2 1) 2)))',
    '(1 (((2 1) 1) (2 (1 2)))) (1 (1 4)) (1 (1 5))',
    '(1 (((2 1) 1) ((2 1) 2))) (1 (1 4)) (1 (1 5))',
    '(1 (((2 1) 1) 5)) (1 (1 4)) (1 (1 (2 (1 2))))',
    '(1 (((2 1) 1) 5)) (1 (1 4)) (1 (1 ((2 1) 2)))',
    '(1 (4 (2 (1 2)))) (1 (1 (1 (1 2)))) (1 (1 5))',
    '(1 (4 (2 (1 2)))) (1 (1 ((2 1) 1))) (1 (1 5))',
    '(1 (4 ((2 1) 2))) (1 (1 (1 (1 2)))) (1 (1 5))',
    '(1 (4 ((2 1) 2))) (1 (1 ((2 1) 1))) (1 (1 5))',
    '(1 (4 5)) (1 (1 (1 (1 2)))) (1 (1 (2 (1 2))))',
    '(1 (4 5)) (1 (1 (1 (1 2)))) (1 (1 ((2 1) 2)))',
    '(1 (4 5)) (1 (1 ((2 1) 1))) (1 (1 (2 (1 2))))',
    '(1 (4 5)) (1 (1 ((2 1) 1))) (1 (1 ((2 1) 2)))',
]


def all_trees(value):
    """Every unlabeled tree with the given value."""
    out = [Leaf(value)]
    for a in range(1, value):
        out.extend(Node(u, v) for u in all_trees(a) for v in all_trees(value - a))
    return out


def small_random_tree(rng, max_value):
    while True:
        t = random_tree(rng, rng.randint(0, max_value - 1), max_leaf=3)
        if t.value <= max_value:
            return t


def as_later_tree(t):
    # classify checks every node of the trees after the first one
    return Forest((Leaf(1), t), check=False)


class TestClassify(unittest.TestCase):

    def test_cases(self):
        cases = {
            '3 4': AlignmentClass.StronglyRightAligned,
            '(1 (1 2)) 3': AlignmentClass.StronglyRightAligned,
            '(1 2)': AlignmentClass.NotEven,
            '1 (1 2)': AlignmentClass.NotEven,
            '(1 ((1 1) (1 1)))': AlignmentClass.Even,
            '(1 (2 1))': AlignmentClass.Admissible,
            '1 ((1 (1 2)) (4 5))': AlignmentClass.RightAligned,
            '(1 (1 5)@2)@1 (1 (1 2)@4)@3': AlignmentClass.StronglyRightAligned,
            '(1 (1 5)@3)@1 (1 (1 2)@4)@2': AlignmentClass.Admissible,
        }
        for text, expected in cases.items():
            self.assertEqual(classify(parse_forest(text)), expected, text)

    def test_root_is_leftmost(self):
        # the root of the first tree only has to have even length
        self.assertEqual(classify(parse_forest('(5 (1 2))')), AlignmentClass.StronglyRightAligned)
        self.assertEqual(classify(parse_forest('(5 (1 2)@2)@1')), AlignmentClass.StronglyRightAligned)
        self.assertEqual(classify(parse_forest('(1 (2 3))')), AlignmentClass.StronglyRightAligned)
        self.assertEqual(classify(parse_forest('1 (5 (1 2))')), AlignmentClass.Admissible)

    def test_classes_are_ordered(self):
        self.assertLess(AlignmentClass.Admissible, AlignmentClass.RightAligned)


class TestRewrites(unittest.TestCase):

    def setUp(self):
        self.rng = random.Random(SEED)

    def check_odd(self, t):
        out = odd_align(t)
        self.assertEqual(pi(out), pi(Forest([t])), str(t))
        for u, _ in out.trees():
            self.assertEqual(u.left.length % 2, 0)
            self.assertEqual(u.right.length % 2, 0)
            self.assertLess(u.left.value, u.right.value)

    def check_even(self, t):
        out = even_align(t)
        self.assertEqual(pi(out), pi(Forest([t])), str(t))
        for u, _ in out.trees():
            self.assertGreaterEqual(classify(as_later_tree(u)), AlignmentClass.RightAligned, str(u))

    def check_strong(self, t):
        out = strong_align(t)
        self.assertEqual(pi(out), pi(Forest([t])), str(t))
        for u, _ in out.trees():
            self.assertEqual(classify(as_later_tree(u)), AlignmentClass.StronglyRightAligned, str(u))

    def check_all(self, t):
        if t.length % 2:
            self.check_odd(t)
        else:
            self.check_even(t)
            if t.length:
                self.check_strong(t)

    def test_odd_align(self):
        self.assertEqual(str(odd_align(parse_tree('(2 1)'))), '-1 * (1 2)')
        self.assertEqual(len(odd_align(parse_tree('(3 3)'))), 0)
        for _ in range(40):
            self.check_odd(random_tree(self.rng, self.rng.choice([1, 3, 5])))

    def test_even_align(self):
        for _ in range(40):
            self.check_even(random_tree(self.rng, self.rng.choice([0, 2, 4])))

    def test_strong_align(self):
        for _ in range(40):
            self.check_strong(random_tree(self.rng, self.rng.choice([2, 4])))

    def test_every_small_tree(self):
        for value in range(1, 8):
            for t in all_trees(value):
                self.check_all(t)

    def test_random_trees(self):
        for _ in range(500):
            self.check_all(small_random_tree(self.rng, 10))

    def test_parity_errors(self):
        with self.assertRaises(NotOddLength):
            odd_align(parse_tree('(1 (2 3))'))
        with self.assertRaises(NotEvenLength):
            even_align(parse_tree('(1 2)'))
        with self.assertRaises(NotEvenLength):
            strong_align(parse_tree('(1 2)'))

    def test_labels_are_erased(self):
        self.assertEqual(odd_align(parse_tree('(2 1)@1')), odd_align(parse_tree('(2 1)')))


class TestRender(unittest.TestCase):

    def random_even_forest(self, rng):
        first = random_tree(rng, rng.randint(0, 4))
        later = [random_tree(rng, rng.choice([0, 2])) for _ in range(rng.randint(0, 2))]
        return Forest([first] + later)

    def test_delta_is_preserved(self):
        rng = random.Random(SEED)
        for _ in range(40):
            f = self.random_even_forest(rng)
            out = render_unlabeled(f)
            self.assertEqual(delta(out), delta(f), str(f))
            for g in out.terms:
                self.assertEqual(classify(g), AlignmentClass.StronglyRightAligned, str(g))

    def test_odd_later_trees_are_in_the_kernel(self):
        # a single forest may have nonzero delta, its B-orbit sum does not
        rng = random.Random(SEED + 2)
        for _ in range(40):
            first = random_tree(rng, rng.choice([1, 3]))
            odd = random_tree(rng, rng.choice([1, 3]))
            f = Forest([first, odd] + [random_tree(rng, rng.choice([0, 2])) for _ in range(rng.randint(0, 1))])
            self.assertEqual(len(render_unlabeled(f)), 0)
            self.assertEqual(delta({BOrbit(f): 1}), 0, str(f))
        f = parse_forest('(1 (1 3)) (1 2)')
        self.assertNotEqual(delta(f), 0)
        self.assertEqual(delta({BOrbit(f): 1}), 0)

    def test_orbit_delta_is_preserved(self):
        rng = random.Random(SEED + 3)
        for _ in range(60):
            first = random_tree(rng, rng.randint(0, 4))
            later = [random_tree(rng, rng.choice([0, 1, 2, 3])) for _ in range(rng.randint(0, 2))]
            orbits = {BOrbit(Forest([first] + later)): Fraction(rng.randint(1, 3))}
            self.assertEqual(delta(render_orbits(orbits)), delta(orbits))

    def test_labeled_forests_up_to_value_eight(self):
        rng = random.Random(SEED + 4)
        checked = 0
        while checked < 100:
            first = random_tree(rng, rng.randint(0, 4), max_leaf=2)
            later = [random_tree(rng, rng.choice([0, 2]), max_leaf=2) for _ in range(rng.randint(0, 1))]
            f = Forest([first] + later)
            if f.value > 8:
                continue
            f = random_labeling(rng, f)
            out = render_forest(f)
            self.assertEqual(out.erase(), render_unlabeled(f))
            self.assertEqual(delta(render_unlabeled(f)), delta(erase(f)), str(f))
            o = BOrbit(erase(f))
            self.assertEqual(delta(render_orbits({o: 1})), delta({o: 1}), str(f))
            checked += 1

    def test_dropped_inputs(self):
        self.assertEqual(len(render_unlabeled(parse_forest('((1 2) 3)'))), 0)
        self.assertEqual(len(render_unlabeled(parse_forest('1 (1 2)'))), 0)

    def test_composition_renders_to_itself(self):
        f = composition_forest([2, 1, 3])
        self.assertEqual(render_unlabeled(f)[f], 1)

    def test_labeled_rendering(self):
        rng = random.Random(SEED + 1)
        for _ in range(20):
            f = self.random_even_forest(rng)
            out = render_forest(f)
            self.assertEqual(out.erase(), render_unlabeled(f))
            for g in out.terms:
                self.assertTrue(g.is_labeled)


class TestOrder(unittest.TestCase):

    def test_example(self):
        self.assertTrue(tree_less(parse_tree('(1 (1 2))'), Leaf(4)))
        self.assertFalse(tree_less(Leaf(4), parse_tree('(1 (1 2))')))
        self.assertTrue(tree_less(Leaf(3), parse_tree('(1 (1 2))')))

    def test_total_order(self):
        rng = random.Random(SEED)
        trees = set()
        for _ in range(30):
            for u, _ in strong_align(random_tree(rng, rng.choice([0, 2]), max_leaf=3)).trees():
                trees.add(u)
        trees = sorted(trees, key=str)
        for u in trees:
            self.assertFalse(tree_less(u, u))
            for v in trees:
                if u != v:
                    self.assertNotEqual(tree_less(u, v), tree_less(v, u), f'{u} {v}')
                    for w in trees:
                        if tree_less(u, v) and tree_less(v, w):
                            self.assertTrue(tree_less(u, w))

    def test_not_comparable(self):
        with self.assertRaises(NotComparable):
            tree_less(parse_tree('(1 2)'), Leaf(3))


class TestPreferredLabeling(unittest.TestCase):

    def test_erase_inverts_F(self):
        rng = random.Random(SEED)
        for _ in range(30):
            first = random_tree(rng, rng.randint(0, 4))
            later = [random_tree(rng, rng.choice([0, 2])) for _ in range(rng.randint(0, 2))]
            for g in render_unlabeled(Forest([first] + later)).terms:
                self.assertEqual(erase(F(g)), g, str(g))

    def test_composition(self):
        f = composition_forest([1, 2])
        self.assertEqual(F(f), f)

    def test_smallest_tree_first(self):
        f = F(parse_forest('1 (1 (1 5)) (1 (1 4))'))
        self.assertEqual(str(f), '1 (1 (1 5)@4)@3 (1 (1 4)@2)@1')

    def test_not_right_aligned(self):
        with self.assertRaises(NotRightAligned):
            F(parse_forest('(1 (2 1))'))


class TestForestOrder(unittest.TestCase):

    def setUp(self):
        self.base = parse_forest('1 (1 (1 2)) 4')

    def test_lexicographic(self):
        x = parse_forest('1 (1 (1 2)) 4')
        y = parse_forest('1 4 (1 (1 2))')
        self.assertTrue(forest_prec(x, y, self.base))
        self.assertFalse(forest_prec(y, x, self.base))

    def test_irreflexive(self):
        self.assertFalse(forest_prec(self.base, self.base, self.base))

    def test_order_example(self):
        forests = [parse_forest(text) for text in ORDER_EXAMPLE]
        x = forests[0]
        for a, b in zip(forests, forests[1:]):
            self.assertTrue(forest_prec(a, b, x), f'{a} {b}')
            self.assertFalse(forest_prec(b, a, x), f'{b} {a}')
        for g in forests[1:]:
            self.assertTrue(forest_prec(x, g, x), str(g))

    def test_shape_mismatch(self):
        with self.assertRaises(ShapeMismatch):
            forest_prec(parse_forest('(1 (1 2)) 4'), self.base, self.base)


if __name__ == '__main__':
    unittest.main()
