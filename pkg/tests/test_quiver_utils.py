import json
import random
import unittest
from fractions import Fraction

from bquiver.align_utils import AlignmentClass, F, NotRightAligned, classify, render_unlabeled
from bquiver.forest_utils import Forest, bullet, erase, parse_forest
from bquiver.orbit_utils import BOrbit, sim_closure
from bquiver.quiver_utils import (Path, QuiverError, TooShort, build_quiver, enumerate_paths, find_edge,
                                  format_partition, iota, iota_orbits, parse_partition, path_counts, path_of,
                                  path_of_orbit_lift, primary_factorization, quiver_dataframe, to_dot, to_json,
                                  vertex_of)

from tests.test_forest_utils import random_tree

SEED = 31

Q6_EDGES = {
    'a': ('1122', '15', '1 (2 (1 2)@2)@1 1'),
    'b': ('1122', '24', '1 (1 (1 2)@2)@1 2'),
    'c': ('15', '∅', '(1 (1 5)@2)@1'),
    'd': ('24', '∅', '(1 (2 4)@2)@1'),
}


class TestPartitions(unittest.TestCase):

    def test_names(self):
        self.assertEqual(format_partition((2, 2, 1, 1)), '1122')
        self.assertEqual(format_partition(()), '∅')
        self.assertEqual(format_partition((10, 1)), '1,10')

    def test_parse(self):
        self.assertEqual(parse_partition('1122'), (2, 2, 1, 1))
        self.assertEqual(parse_partition('∅'), ())
        self.assertEqual(parse_partition('1,10'), (10, 1))


class TestSmallQuivers(unittest.TestCase):

    def test_q1(self):
        q = build_quiver(1)
        self.assertEqual(q.vertices, [(), (1,)])
        self.assertEqual(q.edges, [])
        self.assertEqual(q.dim, 2)

    def test_q7_vertices(self):
        self.assertEqual(len(build_quiver(7).vertices), 45)

    def test_enumerate_paths_groups_by_block(self):
        q = build_quiver(6)
        grouped = enumerate_paths(q)
        self.assertEqual(sum(len(paths) for paths in grouped.values()), 65)
        for (source, dest, length), paths in grouped.items():
            self.assertTrue(all(p.source == source and p.dest == dest and p.length == length for p in paths))
        self.assertEqual(path_counts(q), {0: 30, 1: 28, 2: 7})

    def test_n_must_be_positive(self):
        with self.assertRaises(QuiverError):
            build_quiver(0)


class TestQ6(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.q = build_quiver(6)

    def edge(self, name):
        source, dest, rep = Q6_EDGES[name]
        found = find_edge(self.q, source, dest, rep)
        self.assertEqual(len(found), 1, name)
        return found[0]

    def test_counts(self):
        self.assertEqual(len(self.q.vertices), 30)
        self.assertEqual(len(self.q.edges), 28)
        self.assertEqual(path_counts(self.q), {0: 30, 1: 28, 2: 7})
        self.assertEqual(self.q.dim, 65)

    def test_edge_representatives(self):
        self.assertEqual(self.edge('a').kind, 'Q3')
        self.assertEqual(self.edge('b').kind, 'Q3')
        self.assertEqual(self.edge('c').kind, 'Q1')
        self.assertEqual(self.edge('c').symbol, (True, 1, 1, 5))
        self.assertEqual(self.edge('d').kind, 'Q1')

    def test_edges_are_graded(self):
        for e in self.q.edges:
            self.assertEqual(len(e.source), len(e.dest) + 2)
            self.assertEqual(e.rep.value, 7)
            self.assertEqual(vertex_of(e.rep), e.dest)
            self.assertEqual(classify(erase(e.rep)), AlignmentClass.StronglyRightAligned, str(e.rep))
        for p in self.q.paths:
            self.assertEqual(len(p.source), len(p.dest) + 2 * p.length)

    def test_paths_compose(self):
        c, a = self.edge('c'), self.edge('a')
        pid = self.q.find_path(c.dest, (c, a))
        self.assertIsNotNone(pid)
        self.assertEqual(self.q.paths[pid].source, (2, 2, 1, 1))
        with self.assertRaises(QuiverError):
            Path((), (a, c))

    def test_iota_of_vertices_and_edges(self):
        vertex = self.q.paths[self.q.find_path((2, 1), ())]
        self.assertEqual(iota_orbits(vertex, self.q), {BOrbit(parse_forest('4 1 2')): Fraction(1)})
        for e in self.q.edges:
            path = self.q.paths[self.q.find_path(e.dest, (e,))]
            self.assertEqual(iota_orbits(path, self.q), {e.orbit: Fraction(1)})

    def test_iota_is_a_closure_sum(self):
        for p in self.q.paths_of_length(2):
            orbits = iota_orbits(p, self.q)
            self.assertTrue(orbits)
            self.assertTrue(all(c == 1 for c in orbits.values()))
            some = next(iter(orbits))
            self.assertEqual(set(orbits), sim_closure(some.rep), str(p))
            self.assertEqual(len(iota(p, self.q)), sum(o.size for o in orbits))

    def test_path_of_right_aligned_forests(self):
        for e in self.q.edges:
            self.assertEqual(path_of(e.rep, self.q).edges, (e,))
        for p in self.q.paths_of_length(2):
            for o in iota_orbits(p, self.q):
                y = erase(o.rep)
                if classify(y) < AlignmentClass.RightAligned:
                    continue
                x = F(y)
                image = iota_orbits(path_of(x, self.q), self.q)
                self.assertEqual(set(image), sim_closure(x), str(x))

    def test_path_of_composition(self):
        path = path_of(parse_forest('3 2 2'), self.q)
        self.assertEqual(path.length, 0)
        self.assertEqual(path.dest, (2, 2))
        self.assertEqual(path_of_orbit_lift(parse_forest('3 2 2'), self.q).id, path.id)
        with self.assertRaises(NotRightAligned):
            path_of_orbit_lift(parse_forest('(1 (2 1)) 3'), self.q)

    def test_exports(self):
        dot = to_dot(self.q)
        self.assertTrue(dot.startswith('digraph Q6 {'))
        self.assertIn('"1122" -> "15"', dot)
        self.assertIn('"111111";', dot)
        self.assertNotIn('"111111";', to_dot(self.q, include_isolated=False))
        data = json.loads(to_json(self.q))
        self.assertEqual(data['n'], 6)
        self.assertEqual(len(data['vertices']), 30)
        self.assertEqual(set(data['edges'][0]), {'id', 'kind', 'source', 'dest', 'rep'})
        df = quiver_dataframe(self.q)
        self.assertEqual(df.shape, (28, 5))
        self.assertEqual(set(df['kind']), {'Q1', 'Q2', 'Q3'})


class TestIotaWiggle(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.quivers = {n: build_quiver(n) for n in range(2, 8)}

    def test_random_strongly_right_aligned(self):
        rng = random.Random(SEED)
        checked = 0
        while checked < 60:
            first = random_tree(rng, rng.choice([2, 4]), max_leaf=2)
            later = [random_tree(rng, rng.choice([0, 2]), max_leaf=2) for _ in range(rng.randint(0, 1))]
            for y in render_unlabeled(Forest([first] + later)).terms:
                if not 3 <= y.value <= 8:
                    continue
                q = self.quivers[y.value - 1]
                x = F(y)
                orbits = iota_orbits(path_of(x, q), q)
                self.assertTrue(all(c == 1 for c in orbits.values()), str(x))
                self.assertEqual(set(orbits), sim_closure(x), str(x))
                checked += 1


class TestPrimaryFactorization(unittest.TestCase):

    def test_factors_multiply_back(self):
        f = parse_forest('(1 (1 5)@2)@1 (1 (1 2)@4)@3')
        outer, inner = primary_factorization(f)
        self.assertEqual(str(outer), '(1 (1 5)@2)@1 4')
        self.assertEqual(str(inner), '1 1 5 (1 (1 2)@2)@1')
        self.assertEqual(bullet(outer, inner), f)

    def test_too_short(self):
        with self.assertRaises(TooShort):
            primary_factorization(parse_forest('(1 2)@1'))

    def test_right_child_must_follow(self):
        with self.assertRaises(NotRightAligned):
            primary_factorization(parse_forest('(1 (1 5)@3)@1 (1 (1 2)@4)@2'))


if __name__ == '__main__':
    unittest.main()
