//! Reflection-group data for the Dunkl builders: symmetric groups in
//! their (m-1)-dimensional reflection representation on the sum-zero
//! subspace, and dihedral groups I2(m) in the plane.
//!
//! S_m and the crystallographic dihedral cases m in {2, 3, 4, 6} are
//! realized exactly over the rationals (root-basis coordinates); other
//! dihedral groups use double-double rotation/reflection matrices, since
//! cos(pi/m) is then irrational.

use crate::algebra::{rat_int, Mat, Rat};
use crate::coeff::Coeff;
use crate::dd::Dd;

/// One reflection: its fiber matrix in the reflection representation, the
/// linear form cutting out its mirror, a conjugacy-class index, and a
/// label.
#[derive(Debug, Clone)]
pub struct Reflection<K> {
    pub matrix: Mat<K>,
    pub normal: Vec<K>,
    pub class: usize,
    pub label: String,
    /// Index of this reflection in the group's element list.
    pub element: usize,
}

/// Reflection-representation data plus the abstract multiplication table,
/// enough to build both the reflection and the regular Dunkl pencils.
#[derive(Debug, Clone)]
pub struct ReflectionGroup<K> {
    /// Dimension of the reflection representation (the Dunkl base).
    pub rank: usize,
    pub order: usize,
    pub reflections: Vec<Reflection<K>>,
    pub class_count: usize,
    /// `table[g][h] = g * h` as element indices.
    pub table: Vec<Vec<usize>>,
    /// Matrices of all elements in the reflection representation,
    /// indexed like `table`.
    pub element_matrices: Vec<Mat<K>>,
}

impl<K: Coeff> ReflectionGroup<K> {
    /// Left-multiplication permutation matrix of element `g` on the group
    /// algebra basis; entries are exact 0/1 in any coefficient ring.
    pub fn regular_matrix(&self, g: usize) -> Mat<K> {
        let n = self.order;
        let mut m = Mat::<K>::zeros(n, n);
        for h in 0..n {
            *m.at_mut(self.table[g][h], h) = K::one();
        }
        m
    }
}

/// S_m acting on the sum-zero subspace of R^m with basis
/// `f_i = e_i - e_{i+1}` (coordinates `y_1..y_{m-1}`).
pub fn symmetric_group(m: usize) -> ReflectionGroup<Rat> {
    assert!(m >= 2, "S_m needs m >= 2");
    let perms = all_permutations(m);
    let index_of = |p: &[usize]| perms.iter().position(|q| q == p).unwrap();
    let table: Vec<Vec<usize>> = perms
        .iter()
        .map(|g| {
            perms
                .iter()
                .map(|h| index_of(&compose(g, h)))
                .collect()
        })
        .collect();
    let element_matrices: Vec<Mat<Rat>> =
        perms.iter().map(|p| perm_reflection_matrix(p, m)).collect();

    let mut reflections = Vec::new();
    for a in 1..=m {
        for b in a + 1..=m {
            let mut p: Vec<usize> = (0..m).collect();
            p.swap(a - 1, b - 1);
            let element = index_of(&p);
            reflections.push(Reflection {
                matrix: element_matrices[element].clone(),
                normal: transposition_normal(a, b, m),
                class: 0,
                label: format!("x{a}=x{b}"),
                element,
            });
        }
    }
    ReflectionGroup {
        rank: m - 1,
        order: perms.len(),
        reflections,
        class_count: 1,
        table,
        element_matrices,
    }
}

fn all_permutations(m: usize) -> Vec<Vec<usize>> {
    // Lexicographic order keeps element indices deterministic.
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..m).collect();
    loop {
        out.push(cur.clone());
        // next_permutation
        let Some(i) = (0..m - 1).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..m).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

fn compose(g: &[usize], h: &[usize]) -> Vec<usize> {
    // (g h)(i) = g(h(i))
    h.iter().map(|&i| g[i]).collect()
}

/// Matrix of the permutation action on sum-zero coordinates: a point with
/// slice coordinates `y` has ambient coordinates `p_j = y_j - y_{j-1}`
/// (`y_0 = y_m = 0`); the permuted point is read back through partial
/// sums `y_i = p_1 + ... + p_i`.
fn perm_reflection_matrix(perm: &[usize], m: usize) -> Mat<Rat> {
    let r = m - 1;
    Mat::from_fn(r, r, |row, col| {
        // column = image of basis vector f_{col+1} = e_{col+1} - e_{col+2}
        let mut p = vec![0i64; m];
        p[perm[col]] = 1;
        p[perm[col + 1]] = -1;
        let mut y = 0i64;
        for pj in p.iter().take(row + 1) {
            y += pj;
        }
        rat_int(y)
    })
}

/// The form `x_a - x_b` written in the sum-zero coordinates `y`.
fn transposition_normal(a: usize, b: usize, m: usize) -> Vec<Rat> {
    let r = m - 1;
    let mut n = vec![rat_int(0); r];
    // x_j = y_j - y_{j-1}
    let mut add = |j: usize, sign: i64| {
        if (1..=r).contains(&j) {
            n[j - 1] = &n[j - 1] + rat_int(sign);
        }
    };
    add(a, 1);
    add(a - 1, -1);
    add(b, -1);
    add(b - 1, 1);
    n
}

/// Crystallographic dihedral groups through their Cartan realization; the
/// simple reflections are integer matrices in coroot coordinates.
pub fn dihedral_group_exact(m: usize) -> ReflectionGroup<Rat> {
    assert!(matches!(m, 2 | 3 | 4 | 6), "exact dihedral realization needs m in {{2,3,4,6}}");
    let (a, b) = match m {
        2 => (0, 0),
        3 => (-1, -1),
        4 => (-1, -2),
        6 => (-1, -3),
        _ => unreachable!(),
    };
    // s_i(x) = x - alpha_i(x) e_i with alpha_1 = (2, a), alpha_2 = (b, 2).
    let s1 = Mat::from_rows(vec![
        vec![rat_int(-1), rat_int(-a)],
        vec![rat_int(0), rat_int(1)],
    ]);
    let s2 = Mat::from_rows(vec![
        vec![rat_int(1), rat_int(0)],
        vec![rat_int(-b), rat_int(-1)],
    ]);
    group_closure_2d(vec![s1, s2], m)
}

/// Any dihedral group through double-double rotation/reflection matrices;
/// reflections fix the lines at angles `pi k / m`.
pub fn dihedral_group_dd(m: usize) -> ReflectionGroup<Dd> {
    assert!(m >= 2);
    let refl = |k: i64| -> Mat<Dd> {
        // reflection about the line at angle pi k / m
        let (s2t, c2t) = Dd::sincos_pi_frac(2 * k, m as i64);
        Mat::from_rows(vec![vec![c2t, s2t], vec![s2t, -c2t]])
    };
    let s1 = refl(0);
    let s2 = refl(1);
    group_closure_2d(vec![s1, s2], m)
}

/// Builds the full dihedral structure from the two simple reflections.
fn group_closure_2d<K: Coeff>(gens: Vec<Mat<K>>, m: usize) -> ReflectionGroup<K> {
    let eq = |x: &Mat<K>, y: &Mat<K>| -> bool {
        if K::EXACT {
            x == y
        } else {
            x.sub(y).approx_zero(1e-20)
        }
    };
    let mut elements: Vec<Mat<K>> = vec![Mat::identity(2)];
    let mut frontier = vec![0usize];
    while let Some(i) = frontier.pop() {
        for g in &gens {
            let prod = elements[i].matmul(g);
            if !elements.iter().any(|e| eq(e, &prod)) {
                elements.push(prod);
                frontier.push(elements.len() - 1);
            }
        }
    }
    assert_eq!(elements.len(), 2 * m, "dihedral closure has order 2m");
    let find = |x: &Mat<K>| elements.iter().position(|e| eq(e, x)).unwrap();
    let table: Vec<Vec<usize>> = elements
        .iter()
        .map(|g| elements.iter().map(|h| find(&g.matmul(h))).collect())
        .collect();

    // Reflections: determinant -1 (2x2 orthogonal-like action).
    let det = |x: &Mat<K>| {
        x.at(0, 0)
            .ring_mul(x.at(1, 1))
            .ring_sub(&x.at(0, 1).ring_mul(x.at(1, 0)))
    };
    let mut refl_elements: Vec<usize> = (0..elements.len())
        .filter(|&i| det(&elements[i]).ring_add(&K::one()).approx_zero(1e-18))
        .collect();
    refl_elements.sort();
    assert_eq!(refl_elements.len(), m);

    // Conjugacy classes by closure under conjugation with the generators.
    let mut class_of: Vec<Option<usize>> = vec![None; elements.len()];
    let mut class_count = 0;
    for &w in &refl_elements {
        if class_of[w].is_some() {
            continue;
        }
        let class = class_count;
        class_count += 1;
        let mut orbit = vec![w];
        class_of[w] = Some(class);
        while let Some(v) = orbit.pop() {
            for g in 0..elements.len() {
                // g v g^{-1}: find g^{-1} from the table
                let ginv = (0..elements.len()).find(|&x| table[g][x] == 0).unwrap();
                let c = table[table[g][v]][ginv];
                if class_of[c].is_none() {
                    class_of[c] = Some(class);
                    orbit.push(c);
                }
            }
        }
    }

    let reflections = refl_elements
        .iter()
        .enumerate()
        .map(|(idx, &w)| {
            let mat = elements[w].clone();
            // rows of (1 - w) vanish on the mirror
            let one_minus = Mat::<K>::identity(2).sub(&mat);
            let row0 = vec![one_minus.at(0, 0).clone(), one_minus.at(0, 1).clone()];
            let row1 = vec![one_minus.at(1, 0).clone(), one_minus.at(1, 1).clone()];
            let normal = if row0.iter().all(|x| x.approx_zero(1e-18)) {
                row1
            } else {
                row0
            };
            Reflection {
                matrix: mat,
                normal,
                class: class_of[w].unwrap(),
                label: format!("H{idx}"),
                element: w,
            }
        })
        .collect();

    ReflectionGroup {
        rank: 2,
        order: elements.len(),
        reflections,
        class_count,
        table,
        element_matrices: elements,
    }
}
