use proptest::prelude::*;

use sigmagit::format::{module_json, parse_module_file, to_canonical_json};
use sigmagit::gitdecide::{excess, exhaustive_verdict, graded, SearchConfig};
use sigmagit::hilbertmumford::{limit_at_zero, mu, weight_sequences, Limit, OneParamSubgroup, Weight};
use sigmagit::linalg::{kernel, ExactField, Matrix, Subspace};
use sigmagit::parahoric::{dn_det, dn_mul, is_fixed_plus, pfaffian, plus_involution, DualNumberMatrix};
use sigmagit::sample::{
    random_invertible, random_involution, random_isotropic_pair, random_matrix, random_sign, random_valid_module, rng,
    symmetrized_module,
};
use sigmagit::sigmamod::{iso_exhaustive, verify_witness, IsoOutcome, SigmaModule};

fn field_strategy() -> impl Strategy<Value = ExactField> {
    prop_oneof![
        Just(ExactField::Rational),
        Just(ExactField::Prime(2)),
        Just(ExactField::Prime(3)),
        Just(ExactField::Prime(5)),
    ]
}

fn finite_strategy() -> impl Strategy<Value = ExactField> {
    prop_oneof![Just(ExactField::Prime(2)), Just(ExactField::Prime(3))]
}

fn module(field: ExactField, n: usize, wd: usize, seed: u64) -> SigmaModule {
    let mut r = rng(seed);
    let sign = random_sign(&mut r);
    let w = random_involution(field, wd, &mut r);
    if field.is_finite() {
        random_valid_module(field, sign, &w, n, &mut r)
    } else {
        symmetrized_module(field, sign, &w, n, &mut r)
    }
}

/// A one-parameter subgroup with random weights on a random basis.
fn subgroup(field: ExactField, n: usize, seed: u64) -> OneParamSubgroup {
    let mut r = rng(seed);
    let mut weights: Vec<i64> = (0..n).map(|i| (seed as i64 + 3 * i as i64) % 5 - 2).collect();
    let total: i64 = weights.iter().sum();
    weights[n - 1] -= total;
    let g = random_invertible(field, n, &mut r);
    OneParamSubgroup::diagonal(field, &weights)
        .unwrap()
        .conjugate(&g)
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn action_composes(field in field_strategy(), n in 1usize..=4, wd in 1usize..=2, seed in any::<u64>()) {
        let q = module(field, n, wd, seed);
        let mut r = rng(seed ^ 1);
        let g = random_invertible(field, n, &mut r);
        let h = random_invertible(field, n, &mut r);
        let stepwise = q.act(&g).unwrap().act(&h).unwrap();
        prop_assert_eq!(&stepwise, &q.act(&(&h * &g)).unwrap());
        prop_assert!(stepwise.validate());
        prop_assert_eq!(q.act(&g).unwrap().act(&g.inverse().unwrap()).unwrap(), q);
    }

    #[test]
    fn orthogonal_is_a_kernel(field in field_strategy(), n in 1usize..=4, seed in any::<u64>()) {
        let q = module(field, n, 1, seed);
        let mut r = rng(seed ^ 2);
        let v = Subspace::row_space(&random_matrix(field, 2, n, &mut r));
        let perp = q.orthogonal(&v).unwrap();
        for x in perp.basis_vectors() {
            for y in v.basis_vectors() {
                prop_assert!(q.eval(&x, &y).iter().all(|c| c.is_zero()));
            }
        }
        // Codimension at most dim V · dim W.
        prop_assert!(n - perp.dim() <= v.dim() * q.w().dim());
        prop_assert_eq!(q.radical().dim(), left_kernel_dim(&q));
    }

    #[test]
    fn weight_is_equivariant(field in field_strategy(), n in 1usize..=4, seed in any::<u64>()) {
        let q = module(field, n, 1, seed);
        let lambda = subgroup(field, n, seed ^ 3);
        let g = random_invertible(field, n, &mut rng(seed ^ 4));
        let moved = q.act(&g).unwrap();
        prop_assert_eq!(mu(&lambda.conjugate(&g).unwrap(), &moved).unwrap(), mu(&lambda, &q).unwrap());
    }

    #[test]
    fn limit_is_a_fixed_point(field in field_strategy(), n in 1usize..=4, seed in any::<u64>()) {
        let q = module(field, n, 1, seed);
        let lambda = subgroup(field, n, seed ^ 5);
        match limit_at_zero(&lambda, &q).unwrap() {
            Limit::Exists(m) => {
                prop_assert!(m.validate());
                match mu(&lambda, &q).unwrap() {
                    Weight::Finite(w) => {
                        prop_assert!(w <= 0);
                        prop_assert_eq!(w < 0, m.is_zero());
                    }
                    Weight::MinusInfinity => prop_assert!(m.is_zero()),
                }
                prop_assert_eq!(limit_at_zero(&lambda, &m).unwrap(), Limit::Exists(m.clone()));
                let t = field.from_i64(2);
                if !t.is_zero() && !t.is_one() {
                    prop_assert_eq!(m.act(&lambda.at(&t).unwrap()).unwrap(), m);
                }
            }
            Limit::Diverges => prop_assert!(matches!(mu(&lambda, &q).unwrap(), Weight::Finite(w) if w > 0)),
        }
    }

    #[test]
    fn inverse_subgroup_weight(field in field_strategy(), n in 1usize..=4, seed in any::<u64>()) {
        let lambda = subgroup(field, n, seed);
        let t = field.from_i64(3);
        prop_assume!(!t.is_zero());
        let product = &lambda.at(&t).unwrap() * &lambda.inverse().at(&t).unwrap();
        prop_assert_eq!(product, Matrix::identity(field, n));
        prop_assert!(lambda.at(&t).unwrap().det().is_one());
    }

    #[test]
    fn weight_sequences_balance(dims in prop::collection::vec(1usize..=3, 1..=3), bound in 0i64..=3) {
        for seq in weight_sequences(&dims, bound) {
            prop_assert_eq!(seq.iter().zip(&dims).map(|(a, d)| a * *d as i64).sum::<i64>(), 0);
            prop_assert!(seq.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(seq.iter().all(|a| a.abs() <= bound));
        }
    }

    #[test]
    fn excess_is_invariant(field in field_strategy(), n in 1usize..=4, d in 1usize..=4, seed in any::<u64>()) {
        let d = d.min(n);
        let mut r = rng(seed);
        let sign = random_sign(&mut r);
        let w = random_involution(field, 1, &mut r);
        let (q, v) = random_isotropic_pair(field, sign, &w, n, d, &mut r);
        let g = random_invertible(field, n, &mut r);
        prop_assert!(q.is_totally_isotropic(&v).unwrap());
        prop_assert_eq!(excess(&q.act(&g).unwrap(), &v.image(&g)).unwrap(), excess(&q, &v).unwrap());
    }

    #[test]
    fn verdict_is_invariant(field in finite_strategy(), n in 1usize..=3, wd in 1usize..=2, seed in any::<u64>()) {
        let q = module(field, n, wd, seed);
        let g = random_invertible(field, n, &mut rng(seed ^ 6));
        let a = exhaustive_verdict(&q, 4).unwrap();
        let b = exhaustive_verdict(&q.act(&g).unwrap(), 4).unwrap();
        prop_assert_eq!(a.status, b.status);
    }

    #[test]
    fn graded_module_is_isomorphic_after_moving(n in 1usize..=3, seed in any::<u64>()) {
        let field = ExactField::Prime(3);
        let q = module(field, n, 1, seed);
        let cfg = SearchConfig::default();
        prop_assume!(exhaustive_verdict(&q, 4).unwrap().status.is_semistable());
        let g = random_invertible(field, n, &mut rng(seed ^ 7));
        let a = graded(&q, &cfg).unwrap().assembled;
        let b = graded(&q.act(&g).unwrap(), &cfg).unwrap().assembled;
        match iso_exhaustive(&a, &b, 4).unwrap() {
            IsoOutcome::Yes(f) => prop_assert!(verify_witness(&a, &b, &f)),
            other => prop_assert!(false, "graded modules not isomorphic: {}", other.as_str()),
        }
    }

    #[test]
    fn module_json_round_trips(field in field_strategy(), n in 1usize..=3, wd in 1usize..=2, seed in any::<u64>()) {
        let q = module(field, n, wd, seed);
        let text = to_canonical_json(&module_json(&q)).unwrap();
        let parsed = parse_module_file(text.as_bytes(), None).unwrap();
        prop_assert_eq!(&parsed.module, &q);
        prop_assert_eq!(to_canonical_json(&module_json(&parsed.module)).unwrap(), text);
    }

    #[test]
    fn pfaffian_under_congruence(n in prop::sample::select(vec![2usize, 4, 6]), seed in any::<u64>()) {
        let field = ExactField::Rational;
        let mut r = rng(seed);
        let m = random_matrix(field, n, n, &mut r);
        let a = &m - &m.transpose();
        let p = random_matrix(field, n, n, &mut r);
        let moved = &(&p.transpose() * &a) * &p;
        prop_assert_eq!(pfaffian(&moved).unwrap(), &p.det() * &pfaffian(&a).unwrap());
    }

    #[test]
    fn dual_determinant_is_multiplicative(field in field_strategy(), n in 1usize..=3, seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = DualNumberMatrix::new(random_matrix(field, n, n, &mut r), random_matrix(field, n, n, &mut r)).unwrap();
        let b = DualNumberMatrix::new(random_matrix(field, n, n, &mut r), random_matrix(field, n, n, &mut r)).unwrap();
        let (a0, a1) = dn_det(&a);
        let (b0, b1) = dn_det(&b);
        let (c0, c1) = dn_det(&dn_mul(&a, &b).unwrap());
        prop_assert_eq!(c0, &a0 * &b0);
        prop_assert_eq!(c1, &(&a0 * &b1) + &(&a1 * &b0));
    }

    #[test]
    fn plus_involution_is_an_involution(field in finite_strategy(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = DualNumberMatrix::new(random_invertible(field, 2, &mut r), random_matrix(field, 2, 2, &mut r)).unwrap();
        let once = plus_involution(&a).unwrap();
        prop_assert_eq!(plus_involution(&once).unwrap(), a.clone());
        if is_fixed_plus(&a) {
            prop_assert_eq!(once, a);
        }
    }
}

/// `dim {x : xᵀB_k = 0 for all k}`.
fn left_kernel_dim(q: &SigmaModule) -> usize {
    let transposes: Vec<Matrix> = q.forms().iter().map(Matrix::transpose).collect();
    let stacked = Matrix::stack(q.field(), q.dim_h(), &transposes.iter().collect::<Vec<_>>()).unwrap();
    kernel(&stacked).dim()
}
