use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use conjcert::canonical::{frobenius_form, is_cyclic, primary_decomposition};
use conjcert::csa::{
    hilbert_symbol, involution_to_twist, make_twisted_involution, split_involution, Algebra, BaseMap,
    CsaElement, InvolutionSpec, Place, QuaternionAlgebra, Sign,
};
use conjcert::json::{transpose_certificate_from_json, transpose_certificate_to_json};
use conjcert::matrix::intertwiner_space;
use conjcert::poly::{companion_matrix, factor_over_prime_field};
use conjcert::sample::{random_csa_element, random_matrix, random_quaternion};
use conjcert::transpose::{symmetric_conjugator, verify_transpose_certificate};
use conjcert::{Field, FieldElement, Mat, Poly};

const PRIMES: [u64; 5] = [2, 3, 5, 7, 101];

fn field_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rationals), prop::sample::select(PRIMES.to_vec()).prop_map(Field::Prime)]
}

fn element(field: &Field, num: i64, den: i64) -> FieldElement {
    match field {
        Field::Prime(_) => field.from_i64(num),
        _ => field.from_fraction(num, den).unwrap(),
    }
}

fn elements(field: Field, count: usize) -> impl Strategy<Value = Vec<FieldElement>> {
    prop::collection::vec((-50i64..=50, 1i64..=20), count)
        .prop_map(move |v| v.into_iter().map(|(n, d)| element(&field, n, d)).collect())
}

fn poly(field: Field, max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-9i64..=9, 0..=max_deg + 1)
        .prop_map(move |c| Poly::new(&field, c.iter().map(|&x| field.from_i64(x)).collect()).unwrap())
}

/// `(field, a)` with `a` up to 6x6 from the shared sampler.
fn matrix_case() -> impl Strategy<Value = Mat> {
    (field_strategy(), 1usize..=6, any::<u64>()).prop_map(|(f, n, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_matrix(&mut rng, &f, n, 5)
    })
}

fn hamilton() -> std::sync::Arc<QuaternionAlgebra> {
    let q = Field::Rationals;
    QuaternionAlgebra::new(&q, q.from_i64(-1), q.from_i64(-1)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn field_axioms(v in field_strategy().prop_flat_map(|f| elements(f, 3))) {
        let (x, y, z) = (&v[0], &v[1], &v[2]);
        prop_assert_eq!(&(x + y) + z, x + &(y + z));
        prop_assert_eq!(x * &(y + z), &(x * y) + &(x * z));
        prop_assert_eq!(x * y, y * x);
        if !x.is_zero() {
            prop_assert!((x * &x.inv().unwrap()).is_one());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn euclidean_division((f, g) in field_strategy().prop_flat_map(|k| (poly(k.clone(), 12), poly(k, 12)))) {
        prop_assume!(!g.is_zero());
        let (q, r) = f.divmod(&g).unwrap();
        prop_assert_eq!(&(&q * &g) + &r, f);
        prop_assert!(r.degree().is_none_or(|d| d < g.degree().unwrap()));
    }

    #[test]
    fn factors_multiply_back(p in prop::sample::select(PRIMES.to_vec()), c in prop::collection::vec(0i64..101, 2..=9)) {
        let field = Field::Prime(p);
        let f = Poly::new(&field, c.iter().map(|&x| field.from_i64(x)).collect()).unwrap();
        prop_assume!(f.degree().unwrap_or(0) >= 1);
        let factors = factor_over_prime_field(&f).unwrap();
        let mut prod = Poly::constant(f.leading().unwrap().clone());
        for (g, e) in &factors {
            prop_assert!(g.is_monic());
            prod = &prod * &g.pow(*e);
            if g.degree().unwrap() <= 3 && g.degree().unwrap() > 1 {
                let roots = field.prime_elements().unwrap().filter(|x| g.eval(x).is_zero()).count();
                prop_assert_eq!(roots, 0);
            }
        }
        prop_assert_eq!(prod, f);
    }

    #[test]
    fn companion_matrix_realizes_f(field in field_strategy(), c in prop::collection::vec(-9i64..=9, 1..=6)) {
        let mut coeffs: Vec<FieldElement> = c.iter().map(|&x| field.from_i64(x)).collect();
        coeffs.push(field.one());
        let f = Poly::new(&field, coeffs).unwrap();
        let cm = companion_matrix(&f).unwrap();
        prop_assert!(f.eval_matrix(&cm).unwrap().is_zero());
        prop_assert_eq!(cm.charpoly().unwrap(), f.clone());
        prop_assert_eq!(cm.minpoly().unwrap(), f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn cayley_hamilton_and_minpoly(a in matrix_case()) {
        let chi = a.charpoly().unwrap();
        let mu = a.minpoly().unwrap();
        prop_assert!(chi.eval_matrix(&a).unwrap().is_zero());
        prop_assert!(mu.eval_matrix(&a).unwrap().is_zero());
        prop_assert!(mu.divides(&chi).unwrap());
        prop_assert_eq!(chi.degree(), Some(a.rows()));
        if matches!(a.field(), Field::Prime(_)) {
            let primes = |f: &Poly| factor_over_prime_field(f).unwrap().into_iter().map(|(g, _)| g).collect::<Vec<_>>();
            prop_assert_eq!(primes(&mu), primes(&chi));
        }
    }

    #[test]
    fn determinant_matches_charpoly(a in matrix_case()) {
        let chi = a.charpoly().unwrap();
        let n = a.rows();
        let sign = if n % 2 == 0 { a.field().one() } else { a.field().from_i64(-1) };
        prop_assert_eq!(a.det().unwrap(), &sign * &chi.coeff(0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn intertwiner_dimensions_agree(a in matrix_case()) {
        let with_t = intertwiner_space(&a, &a.transpose()).unwrap();
        let commutant = intertwiner_space(&a, &a).unwrap();
        prop_assert_eq!(with_t.len(), commutant.len());
        for x in &with_t {
            prop_assert_eq!(&(x * &a), &(&a.transpose() * x));
        }
    }

    #[test]
    fn frobenius_invariants(a in matrix_case()) {
        let fr = frobenius_form(&a).unwrap();
        let h = &fr.transform;
        prop_assert_eq!(&(&(h * &a) * &h.inverse().unwrap()), &fr.block_matrix);
        let mut prod = Poly::one(a.field());
        for w in fr.invariant_factors.windows(2) {
            prop_assert!(w[0].divides(&w[1]).unwrap());
        }
        for f in &fr.invariant_factors {
            prop_assert!(f.is_monic());
            prod = &prod * f;
        }
        prop_assert_eq!(prod, a.charpoly().unwrap());
        prop_assert_eq!(fr.invariant_factors.last().unwrap(), &a.minpoly().unwrap());
        let ft = frobenius_form(&a.transpose()).unwrap();
        prop_assert_eq!(&ft.invariant_factors, &fr.invariant_factors);
        prop_assert_eq!(is_cyclic(&a).unwrap(), is_cyclic(&a.transpose()).unwrap());
    }

    #[test]
    fn primary_dimensions(a in matrix_case()) {
        prop_assume!(matches!(a.field(), Field::Prime(_)));
        let comps = primary_decomposition(&a).unwrap();
        let chi = factor_over_prime_field(&a.charpoly().unwrap()).unwrap();
        prop_assert_eq!(comps.len(), chi.len());
        for (c, (g, e)) in comps.iter().zip(&chi) {
            prop_assert_eq!(&c.prime, g);
            prop_assert_eq!(c.basis.len(), e * g.degree().unwrap());
            // a-stable
            let basis = Mat::from_columns(a.field(), a.rows(), &c.basis).unwrap();
            for v in &c.basis {
                prop_assert!(basis.solve(&a.mul_vec(v).unwrap()).unwrap().is_some());
            }
        }
        let total: usize = comps.iter().map(|c| c.basis.len()).sum();
        prop_assert_eq!(total, a.rows());
    }

    #[test]
    fn symmetric_certificates_round_trip(a in matrix_case()) {
        let cert = symmetric_conjugator(&a).unwrap();
        prop_assert!(cert.checks.conjugates && cert.checks.invertible && cert.symmetric);
        let back = transpose_certificate_from_json(&transpose_certificate_to_json(&cert)).unwrap();
        prop_assert_eq!(&back, &cert);
        prop_assert!(verify_transpose_certificate(&back).valid);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn split_embedding_is_multiplicative(seed in any::<u64>()) {
        let d = hamilton();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_quaternion(&mut rng, &d, 5);
        let y = random_quaternion(&mut rng, &d, 5);
        prop_assert_eq!((&x * &y).split_embedding(), &x.split_embedding() * &y.split_embedding());
        prop_assert_eq!((&x + &y).split_embedding(), &x.split_embedding() + &y.split_embedding());
        prop_assert_eq!((&x * &y).reduced_norm(), &x.reduced_norm() * &y.reduced_norm());
        prop_assert_eq!((&x * &y).conj(), &y.conj() * &x.conj());
    }

    #[test]
    fn involutions_square_to_identity_and_keep_norm(seed in any::<u64>(), n in 1usize..=2, twisted in any::<bool>()) {
        let d = hamilton();
        let theta = InvolutionSpec::gamma_transpose(&d, n);
        let theta = if twisted { make_twisted_involution(&theta, &d.k()).unwrap() } else { theta };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_csa_element(&mut rng, theta.algebra(), 5);
        let tx = theta.apply(&x).unwrap();
        prop_assert_eq!(theta.apply(&tx).unwrap(), x.clone());
        prop_assert_eq!(tx.reduced_norm().unwrap(), x.reduced_norm().unwrap());
    }

    #[test]
    fn hilbert_bilinearity(a in 1i64..=60, a2 in 1i64..=60, b in 1i64..=60, signs in 0u8..8, place in prop::sample::select(vec![0u64, 2, 3, 5, 7, 11, 13])) {
        let s = |bit: u8, x: i64| if signs & bit != 0 { -x } else { x };
        let r = |x: i64| BigRational::from_integer(x.into());
        let (a, a2, b) = (s(1, a), s(2, a2), s(4, b));
        let v = if place == 0 { Place::Infinity } else { Place::Prime(place) };
        let lhs = hilbert_symbol(&r(a * a2), &r(b), v).unwrap();
        let rhs = hilbert_symbol(&r(a), &r(b), v).unwrap() * hilbert_symbol(&r(a2), &r(b), v).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(hilbert_symbol(&r(a), &r(b), v).unwrap(), hilbert_symbol(&r(b), &r(a), v).unwrap());
        prop_assert_eq!(hilbert_symbol(&r(a), &r(-a), v).unwrap(), 1);
    }

    #[test]
    fn sign_follows_twist_symmetry(seed in any::<u64>(), n in 1usize..=4, skew in any::<bool>()) {
        let q = Field::Rationals;
        prop_assume!(!skew || n % 2 == 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = random_matrix(&mut rng, &q, n, 5);
        let u = if skew { &r - &r.transpose() } else { &r + &r.transpose() };
        prop_assume!(u.is_invertible());
        let theta = InvolutionSpec::new(&Algebra::matrix(&q, n), BaseMap::Transpose, Some(CsaElement::MatF(u.clone()))).unwrap();
        let expect = if skew { Sign::Minus } else { Sign::Plus };
        prop_assert_eq!(theta.epsilon(), expect);
        let (b, sign) = involution_to_twist(theta.linear_map()).unwrap();
        prop_assert_eq!(sign, expect);
        prop_assert_eq!(b.clone(), u.normalize_first_nonzero());
    }
}

#[test]
fn scalar_extension_keeps_fixed_dimension() {
    let q = Field::Rationals;
    for (alpha, beta) in [(-1, -1), (-1, 3), (2, 5), (-7, -2)] {
        let d = QuaternionAlgebra::new(&q, q.from_i64(alpha), q.from_i64(beta)).unwrap();
        let theta = InvolutionSpec::gamma_transpose(&d, 1);
        let mut cases = vec![theta.clone()];
        for y in [d.i(), d.j(), d.k()] {
            cases.push(make_twisted_involution(&theta, &y).unwrap());
        }
        for t in cases {
            let ext = split_involution(&t).unwrap();
            assert_eq!(ext.fixed_dimension(), t.fixed_dimension());
            let (_, sign) = involution_to_twist(&ext).unwrap();
            assert_eq!(sign, t.epsilon());
        }
    }
}
