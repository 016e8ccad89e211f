use gerbe_core::cech::{
    class_of, coboundary, cohomology, equivariant_cohomology, nerve_of_cover, trivialize, Cochain, FiniteAction, GroupTable, Nerve,
    DEFAULT_COMPLEX_CAP,
};
use gerbe_core::linalg::{AbelianInvariants, RatMatrix, RatVector};
use num_bigint::BigInt;
use num_traits::Zero;

/// Vertex stars of the octahedron, as subsets of its 26 cells.
fn octahedron() -> Nerve {
    // vertices ±e_i are 0..6 with 2i ↦ +e_i, 2i+1 ↦ −e_i
    let mut cells: Vec<Vec<usize>> = (0..6).map(|v| vec![v]).collect();
    for a in 0..6 {
        for b in a + 1..6 {
            if a / 2 != b / 2 {
                cells.push(vec![a, b]);
            }
        }
    }
    for x in 0..2 {
        for y in 0..2 {
            for z in 0..2 {
                cells.push(vec![x, 2 + y, 4 + z]);
            }
        }
    }
    assert_eq!(cells.len(), 26);
    let cover: Vec<Vec<usize>> = (0..6).map(|v| (0..cells.len()).filter(|&c| cells[c].contains(&v)).collect()).collect();
    nerve_of_cover(&cover, 3).unwrap()
}

fn circle() -> Nerve {
    nerve_of_cover(&[vec![0, 1], vec![1, 2], vec![2, 0]], 3).unwrap()
}

fn cone() -> Nerve {
    nerve_of_cover(&[vec![0, 1], vec![0, 2], vec![0, 3], vec![0, 4]], 5).unwrap()
}

fn point() -> Nerve {
    nerve_of_cover(&[vec![0]], 4).unwrap()
}

fn goldens() -> Vec<(&'static str, Nerve)> {
    vec![("point", point()), ("circle", circle()), ("cone", cone()), ("octahedron", octahedron())]
}

fn z() -> AbelianInvariants {
    AbelianInvariants::free(1)
}

/// Rank of δᵖ over ℚ by Gaussian elimination on rationals.
fn rational_rank(n: &Nerve, p: usize) -> usize {
    let d = n.coboundary_matrix(p);
    let rows: Vec<RatVector> = (0..d.rows()).map(|i| RatVector::integral(d.row(i).to_vec())).collect();
    RatMatrix::from_vectors(&rows, d.cols()).rank()
}

#[test]
fn octahedron_is_a_two_sphere() {
    let n = octahedron();
    assert_eq!((n.count(0), n.count(1), n.count(2), n.count(3)), (6, 12, 8, 0));
    assert!(n.is_downward_closed());
    let expected = [z(), AbelianInvariants::trivial(), z()];
    for (p, want) in expected.iter().enumerate() {
        assert_eq!(&cohomology(&n, p, &z()).unwrap(), want, "H^{p}");
    }
    // Betti numbers from ranks over ℚ
    let r: Vec<usize> = (0..3).map(|p| rational_rank(&n, p)).collect();
    let betti = [6 - r[0], 12 - r[1] - r[0], 8 - r[2] - r[1]];
    assert_eq!(betti, [1, 0, 1]);
    // no torsion, so finite coefficients behave like the free case
    for k in [2u64, 3] {
        let a = AbelianInvariants::cyclic(k);
        assert_eq!(cohomology(&n, 0, &a).unwrap(), a);
        assert!(cohomology(&n, 1, &a).unwrap().is_trivial());
        assert_eq!(cohomology(&n, 2, &a).unwrap(), a);
    }
}

#[test]
fn circle_and_cone() {
    assert_eq!(cohomology(&circle(), 1, &z()).unwrap(), z());
    let c = cone();
    for p in 1..=3 {
        assert!(cohomology(&c, p, &z()).unwrap().is_trivial(), "cone H^{p}");
    }
}

#[test]
fn trivialize_agrees_with_class_on_goldens() {
    for (name, n) in goldens() {
        for p in 1..=2usize {
            if n.count(p) == 0 {
                continue;
            }
            // coboundaries of a family of (p−1)-cochains, shifted by cocycles from a kernel basis
            let q = cohomology(&n, p, &z()).unwrap();
            for seed in 0..6i64 {
                let u: Vec<Vec<BigInt>> = (0..n.count(p - 1)).map(|i| vec![BigInt::from((seed * 7 + i as i64 * 3) % 5 - 2)]).collect();
                let du = coboundary(&n, &Cochain::new(&n, p - 1, z(), u).unwrap());
                let w = trivialize(&n, &du).unwrap().expect("coboundaries trivialize");
                assert_eq!(coboundary(&n, &w), du, "{name} degree {p}");
                let (_, coords) = class_of(&n, &du).unwrap();
                assert!(coords.iter().all(Zero::is_zero));
            }
            if !q.is_trivial() {
                // a cocycle with nonzero class: the fundamental class puts 1 on one top simplex
                let mut vals = vec![vec![BigInt::zero()]; n.count(p)];
                vals[0] = vec![BigInt::from(1)];
                let c = Cochain::new(&n, p, z(), vals).unwrap();
                if coboundary(&n, &c).is_zero() {
                    let (_, coords) = class_of(&n, &c).unwrap();
                    let nonzero = coords.iter().any(|x| !x.is_zero());
                    assert_eq!(trivialize(&n, &c).unwrap().is_none(), nonzero, "{name} degree {p}");
                }
            }
        }
    }
}

#[test]
fn trivial_group_matches_plain_cohomology_on_goldens() {
    for (name, n) in goldens() {
        let act = FiniteAction::trivial_on(GroupTable::trivial(), &n, z());
        for p in 0..=3usize {
            if n.is_truncated() && p + 1 > n.max_dim() {
                continue;
            }
            assert_eq!(
                equivariant_cohomology(&n, &act, p, DEFAULT_COMPLEX_CAP).unwrap(),
                cohomology(&n, p, &z()).unwrap(),
                "{name} degree {p}"
            );
        }
    }
}

#[test]
fn antipodal_action_on_the_octahedron() {
    // ℤ/2 acting freely by x ↦ −x: equivariant cohomology is that of ℝP²
    let n = octahedron();
    let act = FiniteAction {
        group: GroupTable::cyclic(2).unwrap(),
        vertex_perm: vec![(0..6).collect(), (0..6).map(|v| v ^ 1).collect()],
        coefficients: z(),
        coefficient_action: vec![gerbe_core::linalg::IntMatrix::identity(1); 2],
    };
    assert_eq!(equivariant_cohomology(&n, &act, 0, DEFAULT_COMPLEX_CAP).unwrap(), z());
    assert!(equivariant_cohomology(&n, &act, 1, DEFAULT_COMPLEX_CAP).unwrap().is_trivial());
    assert_eq!(equivariant_cohomology(&n, &act, 2, DEFAULT_COMPLEX_CAP).unwrap(), AbelianInvariants::cyclic(2));
}
