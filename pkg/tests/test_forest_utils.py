import random
import unittest

from bquiver.forest_utils import (ZERO, Forest, ForestError, ForestSum, ForestSyntaxError, LabelError, Leaf,
                                  LeafHasNoParity, MissingPosition, MixedLabeling, Node, NotLabeled, bullet,
                                  composition_forest, depth, erase, foliage, format_forest, mirror, parity,
                                  parse_forest, parse_tree, positions, relabel, replace_at, subtree_at)

SEED = 20240611


def random_tree(rng, size, max_leaf=4):
    if size == 0:
        return Leaf(rng.randint(1, max_leaf))
    k = rng.randint(0, size - 1)
    return Node(random_tree(rng, k, max_leaf), random_tree(rng, size - 1 - k, max_leaf))


def random_forest(rng, trees=3, max_size=3):
    return Forest(random_tree(rng, rng.randint(0, max_size)) for _ in range(trees))


class TestTrees(unittest.TestCase):

    def setUp(self):
        self.tree = parse_tree('(1 (2 3))')

    def test_accessors(self):
        self.assertEqual(self.tree.value, 6)
        self.assertEqual(self.tree.length, 2)
        self.assertEqual(subtree_at(self.tree, '21'), Leaf(2))
        self.assertEqual(subtree_at(self.tree, ''), self.tree)

    def test_missing_position(self):
        with self.assertRaises(MissingPosition):
            subtree_at(self.tree, '11')

    def test_leaf_value_must_be_positive(self):
        with self.assertRaises(ForestError):
            Leaf(0)

    def test_mixed_labeling(self):
        with self.assertRaises(MixedLabeling):
            Node(Node(Leaf(1), Leaf(2), 2), Leaf(3))

    def test_mirror_is_an_involution(self):
        rng = random.Random(SEED)
        for _ in range(50):
            t = random_tree(rng, rng.randint(0, 5))
            self.assertEqual(mirror(mirror(t)), t)
        self.assertEqual(format_forest(Forest([mirror(self.tree)])), '((3 2) 1)')

    def test_parity(self):
        self.assertEqual(parity(self.tree), (0, 1))
        self.assertEqual(parity(parse_tree('((1 2) (3 4))')), (1, 1))
        with self.assertRaises(LeafHasNoParity):
            parity(Leaf(3))

    def test_positions_preorder(self):
        words = [pos for pos, _ in positions(self.tree)]
        self.assertEqual(words, ['', '1', '2', '21', '22'])

    def test_replace_at(self):
        t = replace_at(self.tree, '22', parse_tree('(1 2)'))
        self.assertEqual(format_forest(Forest([t])), '(1 (2 (1 2)))')


class TestForests(unittest.TestCase):

    def test_invariants(self):
        f = parse_forest('(1 (2 3)@2)@1 4')
        self.assertEqual(f.length, 2)
        self.assertEqual(f.value, 10)
        self.assertEqual(f.squash, (6, 4))
        self.assertEqual(foliage(f), (1, 2, 3, 4))
        self.assertEqual(depth(f), 1)
        self.assertTrue(f.labeled)

    def test_composition_forest(self):
        f = composition_forest([2, 1, 3])
        self.assertEqual(f.length, 0)
        self.assertIsNone(f.labeled)
        self.assertEqual(format_forest(f), '2 1 3')

    def test_labels_must_be_consecutive(self):
        with self.assertRaises(LabelError):
            parse_forest('(1 2)@2 3')

    def test_labels_must_increase_downwards(self):
        with self.assertRaises(LabelError):
            parse_forest('(1 (2 3)@1)@2')

    def test_erase(self):
        f = parse_forest('(1 (2 3)@2)@1 (4 5)@3')
        self.assertEqual(format_forest(erase(f)), '(1 (2 3)) (4 5)')
        with self.assertRaises(NotLabeled):
            erase(parse_forest('(1 2)'))

    def test_relabel(self):
        t = relabel(parse_tree('(1 (2 3)@2)@1'), 3)
        self.assertEqual(t.label, 4)
        self.assertEqual(t.right.label, 5)


class TestBullet(unittest.TestCase):

    def test_labeled_product(self):
        x = parse_forest('(3 3)@1')
        y = parse_forest('(1 2)@1 (1 2)@2')
        self.assertEqual(format_forest(bullet(x, y)), '((1 2)@2 (1 2)@3)@1')

    def test_mismatch_is_zero(self):
        self.assertIs(bullet(parse_forest('(1 2)'), parse_forest('1 1')), ZERO)

    def test_composition_is_a_unit(self):
        f = parse_forest('(1 (2 3)) 4')
        self.assertEqual(bullet(composition_forest(f.squash), f), f)
        self.assertEqual(bullet(f, composition_forest(foliage(f))), f)

    def test_associativity(self):
        rng = random.Random(SEED)
        for _ in range(30):
            z = random_forest(rng, trees=4, max_size=2)
            # build y and x above z by pairing consecutive trees
            y_trees = [Node(Leaf(a), Leaf(b)) for a, b in zip(z.squash[0::2], z.squash[1::2])]
            y_trees += [Leaf(v) for v in z.squash[len(y_trees) * 2:]]
            y = Forest(y_trees)
            x = composition_forest([sum(y.squash)])
            if len(y.squash) > 1:
                x = Forest([_comb(y.squash)])
            self.assertEqual(bullet(bullet(x, y), z), bullet(x, bullet(y, z)))

    def test_mixed_labeling_rejected(self):
        with self.assertRaises(MixedLabeling):
            bullet(parse_forest('(1 2)@1'), parse_forest('(1 2) 2'))


def _comb(values):
    tree = Leaf(values[-1])
    for v in reversed(values[:-1]):
        tree = Node(Leaf(v), tree)
    return tree


class TestParser(unittest.TestCase):

    def test_round_trip(self):
        for text in ['(1 (1 5)@2)@1', '4 (1 2)@1', '(1 ((1 2) 3)) 2 (4 5)', '7']:
            self.assertEqual(format_forest(parse_forest(text)), text)

    def test_random_round_trip(self):
        rng = random.Random(SEED)
        for _ in range(50):
            f = random_forest(rng)
            self.assertEqual(parse_forest(format_forest(f)), f)

    def test_unbalanced(self):
        with self.assertRaises(ForestSyntaxError) as ctx:
            parse_forest('((1 2')
        self.assertEqual(ctx.exception.position, 5)

    def test_bad_character(self):
        with self.assertRaises(ForestSyntaxError):
            parse_forest('(1 x)')

    def test_empty(self):
        with self.assertRaises(ForestSyntaxError):
            parse_forest('   ')


class TestForestSum(unittest.TestCase):

    def test_arithmetic(self):
        a = parse_forest('(1 2)')
        b = parse_forest('(2 1)')
        s = ForestSum([(a, 2), (b, -1)])
        self.assertEqual(len(s - s), 0)
        self.assertEqual((s * 3)[a], 6)
        self.assertEqual(str(s), '2 * (1 2) - 1 * (2 1)')
        self.assertEqual(str(ForestSum()), '0')

    def test_bullet_drops_mismatches(self):
        x = ForestSum([(parse_forest('(3 3)'), 1)])
        y = ForestSum([(parse_forest('(1 2) (1 2)'), 1), (parse_forest('(1 3) 2'), 1)])
        out = x.bullet(y)
        self.assertEqual(len(out), 1)


if __name__ == '__main__':
    unittest.main()
