//! Library results against brute-force oracles written with plain integers mod p.

use std::collections::{BTreeSet, HashSet};

use rand::Rng;

use sigmagit::gitdecide::{enumerate_totally_isotropic, exhaustive_verdict, Status};
use sigmagit::linalg::{ExactField, Matrix, Scalar};
use sigmagit::parahoric::{dn_det, dn_det_expansion, fiber_structure_check, pfaffian, DualNumberMatrix, FiberCase};
use sigmagit::sample::{
    random_degenerate_module, random_invertible, random_involution, random_matrix, random_sign, random_valid_module,
    rng,
};
use sigmagit::sigmamod::{iso_exhaustive, IsoOutcome, SigmaModule};

type Vector = Vec<u64>;

fn to_int(s: &Scalar) -> u64 {
    s.to_i64().expect("prime field entry") as u64
}

fn form_ints(q: &SigmaModule) -> Vec<Vec<Vec<u64>>> {
    q.forms()
        .iter()
        .map(|b| (0..b.rows()).map(|i| b.row(i).iter().map(to_int).collect()).collect())
        .collect()
}

fn pair(b: &[Vec<u64>], x: &[u64], y: &[u64], p: u64) -> u64 {
    let mut acc = 0;
    for (i, xi) in x.iter().enumerate() {
        for (j, yj) in y.iter().enumerate() {
            acc = (acc + xi * b[i][j] % p * yj) % p;
        }
    }
    acc
}

fn vectors(p: u64, n: usize) -> Vec<Vector> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vector| {
                (0..p).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

/// Every nonzero subspace as its set of elements, built by repeated spanning.
fn subspaces(p: u64, n: usize) -> Vec<BTreeSet<Vector>> {
    let all = vectors(p, n);
    let zero = vec![0; n];
    let extend = |s: &BTreeSet<Vector>, v: &Vector| -> BTreeSet<Vector> {
        let mut out = BTreeSet::new();
        for x in s {
            for c in 0..p {
                out.insert(x.iter().zip(v).map(|(a, b)| (a + c * b) % p).collect());
            }
        }
        out
    };
    let mut seen: HashSet<BTreeSet<Vector>> = HashSet::new();
    let mut frontier: Vec<BTreeSet<Vector>> = vec![BTreeSet::from([zero.clone()])];
    while let Some(s) = frontier.pop() {
        for v in &all {
            if s.contains(v) {
                continue;
            }
            let t = extend(&s, v);
            if seen.insert(t.clone()) {
                frontier.push(t);
            }
        }
    }
    seen.into_iter().collect()
}

fn log_p(mut count: usize, p: u64) -> i64 {
    let mut d = 0;
    while count > 1 {
        count /= p as usize;
        d += 1;
    }
    d
}

struct Oracle {
    status: Status,
    isotropic: usize,
}

/// The semistability definition evaluated on every subspace.
fn definition_oracle(q: &SigmaModule) -> (Oracle, impl Fn(&BTreeSet<Vector>) -> i64) {
    let p = q.field().characteristic();
    let n = q.dim_h();
    let forms = form_ints(q);
    let all = vectors(p, n);
    let excess = move |v: &BTreeSet<Vector>| -> i64 {
        let perp = all
            .iter()
            .filter(|x| v.iter().all(|y| forms.iter().all(|b| pair(b, x, y, p) == 0)))
            .count();
        log_p(v.len(), p) + log_p(perp, p) - n as i64
    };
    let forms = form_ints(q);
    let mut max = None;
    let mut isotropic = 0;
    for v in subspaces(p, n) {
        let iso = v
            .iter()
            .all(|x| v.iter().all(|y| forms.iter().all(|b| pair(b, x, y, p) == 0)));
        if !iso {
            continue;
        }
        isotropic += 1;
        let e = excess(&v);
        max = Some(max.map_or(e, |m: i64| m.max(e)));
    }
    let status = match max {
        Some(e) if e > 0 => Status::Unstable,
        Some(0) => Status::StrictlySemistable,
        _ => Status::Stable,
    };
    (Oracle { status, isotropic }, excess)
}

fn span_elements(basis: &[Vec<Scalar>], p: u64) -> BTreeSet<Vector> {
    let ints: Vec<Vector> = basis.iter().map(|v| v.iter().map(to_int).collect()).collect();
    let n = ints.first().map_or(0, |v| v.len());
    vectors(p, ints.len())
        .into_iter()
        .map(|c| {
            (0..n)
                .map(|i| c.iter().zip(&ints).map(|(ci, v)| ci * v[i]).sum::<u64>() % p)
                .collect()
        })
        .collect()
}

#[test]
fn exhaustive_verdict_matches_definition() {
    let mut r = rng(101);
    let mut by_status = std::collections::HashMap::new();
    for i in 0..150 {
        let field = [ExactField::Prime(2), ExactField::Prime(3), ExactField::Prime(5)][i % 3];
        let n = if field == ExactField::Prime(5) {
            1 + i % 2
        } else {
            1 + i % 3
        };
        let wd = 1 + (i / 3) % 2;
        let sign = random_sign(&mut r);
        let w = random_involution(field, wd, &mut r);
        let q = if i % 4 == 0 {
            random_degenerate_module(field, sign, &w, n, r.gen_range(0..n), &mut r)
        } else {
            random_valid_module(field, sign, &w, n, &mut r)
        };
        let (oracle, excess) = definition_oracle(&q);
        let verdict = exhaustive_verdict(&q, 4).unwrap();
        assert_eq!(verdict.status, oracle.status, "case {i}: {q:?}");
        assert_eq!(
            enumerate_totally_isotropic(&q, 4).unwrap().len(),
            oracle.isotropic,
            "case {i}"
        );
        *by_status.entry(oracle.status).or_insert(0) += 1;
        if let Some(c) = &verdict.certificate {
            let v = span_elements(&c.subspace.basis_vectors(), field.characteristic());
            let e = excess(&v);
            match verdict.status {
                Status::Unstable => assert!(e > 0, "case {i}"),
                Status::StrictlySemistable => assert_eq!(e, 0, "case {i}"),
                _ => unreachable!(),
            }
        }
    }
    for s in [Status::Stable, Status::StrictlySemistable, Status::Unstable] {
        assert!(by_status.get(&s).copied().unwrap_or(0) > 0, "no {s} samples");
    }
}

fn all_int_matrices(p: u64, n: usize) -> Vec<Vec<Vec<u64>>> {
    vectors(p, n * n)
        .into_iter()
        .map(|v| v.chunks(n).map(|c| c.to_vec()).collect())
        .collect()
}

fn int_det(m: &[Vec<u64>], p: u64) -> u64 {
    let n = m.len();
    let mut a: Vec<Vec<i64>> = m.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
    let p = p as i64;
    let mut det = 1i64;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| a[i][c] % p != 0) else {
            return 0;
        };
        if piv != c {
            a.swap(piv, c);
            det = (p - det) % p;
        }
        det = det * a[c][c] % p;
        let inv = (1..p).find(|x| a[c][c] * x % p == 1).unwrap();
        for i in c + 1..n {
            let f = a[i][c] * inv % p;
            let pivot_row = a[c].clone();
            for (x, y) in a[i].iter_mut().zip(&pivot_row).skip(c) {
                *x = ((*x - f * y) % p + p) % p;
            }
        }
    }
    det as u64
}

fn congruent(fa: &[Vec<Vec<u64>>], fb: &[Vec<Vec<u64>>], f: &[Vec<u64>], p: u64) -> bool {
    let n = f.len();
    fa.iter().zip(fb).all(|(a, b)| {
        (0..n).all(|i| {
            (0..n).all(|j| {
                let mut acc = 0;
                for k in 0..n {
                    for l in 0..n {
                        acc = (acc + f[k][i] * b[k][l] % p * f[l][j]) % p;
                    }
                }
                acc == a[i][j]
            })
        })
    })
}

#[test]
fn exhaustive_isomorphism_matches_brute_force() {
    let mut r = rng(202);
    let mut yes = 0;
    let mut no = 0;
    for i in 0..60 {
        let (field, n) = [
            (ExactField::Prime(3), 2),
            (ExactField::Prime(2), 3),
            (ExactField::Prime(2), 2),
        ][i % 3];
        let p = field.characteristic();
        let sign = random_sign(&mut r);
        let w = random_involution(field, 1 + (i / 3) % 2, &mut r);
        let a = random_valid_module(field, sign, &w, n, &mut r);
        let b = if i % 2 == 0 {
            a.act(&random_invertible(field, n, &mut r)).unwrap()
        } else {
            random_valid_module(field, sign, &w, n, &mut r)
        };
        let (fa, fb) = (form_ints(&a), form_ints(&b));
        let brute = all_int_matrices(p, n)
            .iter()
            .any(|f| int_det(f, p) != 0 && congruent(&fa, &fb, f, p));
        let got = iso_exhaustive(&a, &b, 4).unwrap();
        assert!(!matches!(got, IsoOutcome::Unknown), "case {i}");
        assert_eq!(got.is_yes(), brute, "case {i}: {a:?} {b:?}");
        if brute {
            yes += 1;
        } else {
            no += 1;
        }
    }
    assert!(yes > 0 && no > 0);
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn parity(p: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

#[test]
fn pfaffian_matches_permutation_sum() {
    let q = ExactField::Rational;
    let mut r = rng(303);
    for n in [2usize, 4, 6] {
        let perms = permutations(n);
        let half = n / 2;
        let norm = (1..=half).product::<usize>() as i64 * (1i64 << half);
        for _ in 0..5 {
            let m = random_matrix(q, n, n, &mut r);
            let a = &m - &m.transpose();
            let mut sum = q.zero();
            for p in &perms {
                let mut term = q.from_i64(parity(p));
                for k in 0..half {
                    term = &term * &a[(p[2 * k], p[2 * k + 1])];
                }
                sum = &sum + &term;
            }
            let expected = &sum * &q.from_ratio(1, norm).unwrap();
            assert_eq!(pfaffian(&a).unwrap(), expected);
        }
    }
}

#[test]
fn dual_determinant_matches_leibniz() {
    let mut r = rng(404);
    for field in [ExactField::Rational, ExactField::Prime(3), ExactField::Prime(7)] {
        for n in 1..=3 {
            let perms = permutations(n);
            for _ in 0..10 {
                let g = random_matrix(field, n, n, &mut r);
                let h = random_matrix(field, n, n, &mut r);
                // Π (g + εh) over a permutation, keeping terms of ε-degree ≤ 1.
                let (mut d0, mut d1) = (field.zero(), field.zero());
                for p in &perms {
                    let s = field.from_i64(parity(p));
                    let (mut t0, mut t1) = (s, field.zero());
                    for (i, &j) in p.iter().enumerate() {
                        t1 = &(&t1 * &g[(i, j)]) + &(&t0 * &h[(i, j)]);
                        t0 = &t0 * &g[(i, j)];
                    }
                    d0 = &d0 + &t0;
                    d1 = &d1 + &t1;
                }
                let a = DualNumberMatrix::new(g, h).unwrap();
                assert_eq!(dn_det(&a), (d0.clone(), d1.clone()));
                assert_eq!(dn_det_expansion(&a), d1);
            }
        }
    }
}

type Int2 = [[u64; 2]; 2];

fn mul2(a: &Int2, b: &Int2, p: u64) -> Int2 {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = (a[i][0] * b[0][j] + a[i][1] * b[1][j]) % p;
        }
    }
    c
}

fn tr2(a: &Int2) -> Int2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

fn add2(a: &Int2, b: &Int2, p: u64) -> Int2 {
    [
        [(a[0][0] + b[0][0]) % p, (a[0][1] + b[0][1]) % p],
        [(a[1][0] + b[1][0]) % p, (a[1][1] + b[1][1]) % p],
    ]
}

fn neg2(a: &Int2, p: u64) -> Int2 {
    [
        [(p - a[0][0]) % p, (p - a[0][1]) % p],
        [(p - a[1][0]) % p, (p - a[1][1]) % p],
    ]
}

fn all2(p: u64) -> Vec<Int2> {
    vectors(p, 4)
        .into_iter()
        .map(|v| [[v[0], v[1]], [v[2], v[3]]])
        .collect()
}

/// `det(g + εh) = (det g, ε-part)` for 2×2.
fn det2(g: &Int2, h: &Int2, p: u64) -> (u64, u64) {
    let d0 = (g[0][0] * g[1][1] + p * p - g[0][1] * g[1][0]) % p;
    let d1 = (g[0][0] * h[1][1] + h[0][0] * g[1][1] + 2 * p * p - g[0][1] * h[1][0] - h[0][1] * g[1][0]) % p;
    (d0, d1)
}

/// Counts of `A = g + εh` with `A(−ε)ᵀ M A(ε) = M` and `det A = 1`, computed
/// from the dual-number product directly; `M = None` means `M = I`.
fn brute_fixed(p: u64, m: Option<Int2>) -> (usize, usize, usize) {
    let m = m.unwrap_or([[1, 0], [0, 1]]);
    let mut fixed = 0;
    let mut images = HashSet::new();
    let mut kernel = 0;
    for g in all2(p) {
        for h in all2(p) {
            if det2(&g, &h, p) != (1, 0) {
                continue;
            }
            // (gᵀ − εhᵀ) M (g + εh) = gᵀMg + ε(gᵀMh − hᵀMg).
            let c0 = mul2(&mul2(&tr2(&g), &m, p), &g, p);
            let c1 = add2(
                &mul2(&mul2(&tr2(&g), &m, p), &h, p),
                &neg2(&mul2(&mul2(&tr2(&h), &m, p), &g, p), p),
                p,
            );
            if c0 == m && c1 == [[0; 2]; 2] {
                fixed += 1;
                images.insert(g);
                if g == [[1, 0], [0, 1]] {
                    kernel += 1;
                }
            }
        }
    }
    (fixed, images.len(), kernel)
}

#[test]
fn fiber_counts_match_direct_enumeration() {
    for p in [2u64, 3] {
        let field = ExactField::Prime(p);
        let plus = fiber_structure_check(field, 2, &FiberCase::Plus, 0).unwrap();
        let (f, i, k) = brute_fixed(p, None);
        assert_eq!(
            (
                plus.fixed_count as usize,
                plus.image_count as usize,
                plus.kernel_count as usize
            ),
            (f, i, k)
        );
        let j = Matrix::from_i64(field, &[&[0, 1], &[-1, 0]]);
        let alt = fiber_structure_check(field, 2, &FiberCase::Alternating(j), 0).unwrap();
        let (f, i, k) = brute_fixed(p, Some([[0, 1], [p - 1, 0]]));
        assert_eq!(
            (
                alt.fixed_count as usize,
                alt.image_count as usize,
                alt.kernel_count as usize
            ),
            (f, i, k)
        );
        let sl2 = all2(p).iter().filter(|g| det2(g, &[[0; 2]; 2], p).0 == 1).count();
        let unr = fiber_structure_check(field, 2, &FiberCase::Unramified, 0).unwrap();
        assert_eq!(unr.fixed_count as usize, sl2);
    }
}
