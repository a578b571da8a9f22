use num::{One, Signed, Zero};
use proptest::prelude::*;

use convreg::engine::{decide_regular, moore_penrose, EngineOptions, Status};
use convreg::grigorchuk::{GrigWord, GrigorchukGroup, Letter};
use convreg::group::{builtin, Group, GroupElement};
use convreg::linalg::{solve_linear, solve_stochastic, LinearSolution, RationalMatrix};
use convreg::measure::{convolve, translate, Measure};
use convreg::oracle::{brute_force_ginverse, generated_universe, OracleBudget};
use convreg::rational::{frac, Rational};
use convreg::support::{left_operator, right_operator, SupportTable};

fn finite_groups() -> Vec<Group> {
    vec![
        builtin::z2(),
        builtin::z3(),
        builtin::z4(),
        builtin::klein(),
        builtin::s3(),
        builtin::d4(),
        builtin::q8(),
        builtin::s3_perm(),
    ]
}

fn group_and_elements(index: usize) -> (Group, Vec<GroupElement>) {
    let group = finite_groups().swap_remove(index % 8);
    let elements = group.elements(64).unwrap();
    (group, elements)
}

fn measure_from(group: &Group, elements: &[GroupElement], raw: &[(usize, u32)]) -> Measure {
    let total: u32 = raw.iter().map(|(_, w)| w).sum();
    Measure::from_atoms(
        group,
        raw.iter().map(|&(i, w)| {
            (
                elements[i % elements.len()].clone(),
                frac(w as i64, total as i64),
            )
        }),
    )
    .unwrap()
}

fn raw_measure() -> impl Strategy<Value = Vec<(usize, u32)>> {
    prop::collection::vec((0usize..16, 1u32..7), 1..5)
}

fn letters() -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(
        prop::sample::select(vec![Letter::A, Letter::B, Letter::C, Letter::D]),
        0..=12,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_axioms(index in 0usize..8, i in 0usize..64, j in 0usize..64, k in 0usize..64) {
        let (group, el) = group_and_elements(index);
        let (a, b, c) = (&el[i % el.len()], &el[j % el.len()], &el[k % el.len()]);
        let left = group.multiply(&group.multiply(a, b).unwrap(), c).unwrap();
        let right = group.multiply(a, &group.multiply(b, c).unwrap()).unwrap();
        prop_assert!(group.equal(&left, &right).unwrap());
        let inv = group.inverse(a).unwrap();
        prop_assert!(group.is_identity(&group.multiply(a, &inv).unwrap()).unwrap());
        prop_assert!(group.is_identity(&group.multiply(&inv, a).unwrap()).unwrap());
        let order = group.order(a, 64).unwrap();
        prop_assert_eq!(el.len() as u64 % order, 0);
    }

    #[test]
    fn grigorchuk_axioms(u in letters(), v in letters(), w in letters()) {
        let g = GrigorchukGroup::new();
        let (u, v, w) = (GrigWord::reduce(u), GrigWord::reduce(v), GrigWord::reduce(w));
        prop_assert!(g.is_identity(&g.multiply(&u, &u.inverse())));
        let left = g.multiply(&g.multiply(&u, &v), &w);
        let right = g.multiply(&u, &g.multiply(&v, &w));
        prop_assert!(g.equal(&left, &right));
        let (_, s0, s1) = u.sections();
        prop_assert!(s0.len() <= u.len().div_ceil(2));
        prop_assert!(s1.len() <= u.len().div_ceil(2));
        let order = g.order(&u, 1 << 16).unwrap();
        prop_assert!(order.is_power_of_two());
    }

    #[test]
    fn convolution_laws(index in 0usize..8, a in raw_measure(), b in raw_measure(), c in raw_measure()) {
        let (group, el) = group_and_elements(index);
        let (mu, nu, rho) = (measure_from(&group, &el, &a), measure_from(&group, &el, &b), measure_from(&group, &el, &c));
        let left = convolve(&group, &convolve(&group, &mu, &nu).unwrap(), &rho).unwrap();
        let right = convolve(&group, &mu, &convolve(&group, &nu, &rho).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);

        let product = convolve(&group, &mu, &nu).unwrap();
        let mass: Rational = product.weights().iter().sum();
        prop_assert!(mass.is_one());
        let mut expected: Vec<GroupElement> = Vec::new();
        for x in mu.support() {
            for y in nu.support() {
                let xy = group.multiply(&x, &y).unwrap();
                if !expected.contains(&xy) {
                    expected.push(xy);
                }
            }
        }
        expected.sort();
        prop_assert_eq!(product.support(), expected);

        let g = &el[a[0].0 % el.len()];
        let h = &el[b[0].0 % el.len()];
        let by_convolution = convolve(
            &group,
            &convolve(&group, &Measure::dirac(&group, g.clone()).unwrap(), &mu).unwrap(),
            &Measure::dirac(&group, h.clone()).unwrap(),
        ).unwrap();
        prop_assert_eq!(translate(&group, &mu, g, h).unwrap(), by_convolution);
    }

    #[test]
    fn json_round_trip(index in 0usize..8, a in raw_measure()) {
        let (group, el) = group_and_elements(index);
        let mu = measure_from(&group, &el, &a);
        let text = serde_json::to_string(&mu.to_records()).unwrap();
        let records: Vec<convreg::measure::AtomRecord> = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(Measure::from_records(&group, &records).unwrap(), mu.clone());
        prop_assert_eq!(Measure::parse(&group, &mu.to_text()).unwrap(), mu);
    }

    #[test]
    fn operator_algebra(index in 0usize..8, gens in prop::collection::vec(0usize..16, 0..3),
                        a in prop::collection::vec(1u32..7, 16), b in prop::collection::vec(1u32..7, 16)) {
        let (group, el) = group_and_elements(index);
        let generators: Vec<GroupElement> = gens.iter().map(|&i| el[i % el.len()].clone()).collect();
        let mut subgroup = group.closure(&generators, 64).unwrap();
        if subgroup.is_empty() {
            subgroup.push(group.identity());
        }
        let table = SupportTable::build(&group, &subgroup).unwrap();
        let n = table.len();
        let to_weights = |raw: &[u32]| -> Vec<Rational> {
            let total: u32 = raw[..n].iter().sum();
            raw[..n].iter().map(|&w| frac(w as i64, total as i64)).collect()
        };
        let alpha = to_weights(&a);
        let beta = to_weights(&b);
        let l = left_operator(&alpha, &table).unwrap();
        let r = right_operator(&alpha, &table).unwrap();
        prop_assert!(l.is_doubly_stochastic());
        prop_assert!(r.is_doubly_stochastic());
        let lr = convreg::linalg::mat_mul(&l.matrix, &r.matrix).unwrap();
        let rl = convreg::linalg::mat_mul(&r.matrix, &l.matrix).unwrap();
        prop_assert_eq!(lr, rl);
        if table.is_abelian() {
            prop_assert_eq!(&l.matrix, &r.matrix);
        }
        let mu = table.measure_from_weights(&group, &alpha).unwrap();
        let nu = table.measure_from_weights(&group, &beta).unwrap();
        let left_product = table.weights_of(&group, &convolve(&group, &mu, &nu).unwrap()).unwrap();
        prop_assert_eq!(l.matrix.mul_vec(&beta).unwrap(), left_product);
        let right_product = table.weights_of(&group, &convolve(&group, &nu, &mu).unwrap()).unwrap();
        prop_assert_eq!(r.matrix.mul_vec(&beta).unwrap(), right_product);
    }

    #[test]
    fn solver_witness_is_exact(n in 1usize..5, entries in prop::collection::vec(0u32..4, 16),
                               hidden in prop::collection::vec(0u32..4, 4)) {
        let rows: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|j| Rational::from_integer(entries[i * 4 + j].into())).collect())
            .collect();
        let m = RationalMatrix::from_rows(rows.clone()).unwrap();
        // A right-hand side reachable from the simplex half of the time.
        let total: u32 = hidden[..n].iter().sum::<u32>().max(1);
        let mut beta: Vec<Rational> = hidden[..n].iter().map(|&h| frac(h as i64, total as i64)).collect();
        if hidden[..n].iter().all(|&h| h == 0) {
            beta[0] = Rational::one();
        }
        let reachable = m.mul_vec(&beta).unwrap();
        let shifted: Vec<Rational> = reachable.iter().enumerate()
            .map(|(i, v)| if i == 0 && hidden[0] % 2 == 1 { v - frac(7, 3) } else { v.clone() })
            .collect();
        for alpha in [reachable, shifted] {
            let first = solve_stochastic(&m, &alpha).unwrap();
            prop_assert_eq!(&first, &solve_stochastic(&m, &alpha).unwrap());
            let mut augmented = rows.clone();
            augmented.push(vec![Rational::one(); n]);
            let mut rhs = alpha.clone();
            rhs.push(Rational::one());
            let linear = solve_linear(&RationalMatrix::from_rows(augmented).unwrap(), &rhs).unwrap();
            match first.witness() {
                Some(w) => {
                    prop_assert!(w.iter().all(|v| !v.is_negative()));
                    prop_assert!(w.iter().sum::<Rational>().is_one());
                    prop_assert_eq!(m.mul_vec(w).unwrap(), alpha.clone());
                    let consistent = !matches!(linear, LinearSolution::Inconsistent { .. });
                    prop_assert!(consistent);
                }
                None => match linear {
                    LinearSolution::Unique(x) => prop_assert!(x.iter().any(|v| v.is_negative())),
                    LinearSolution::Inconsistent { .. } | LinearSolution::Underdetermined { .. } => {}
                },
            }
        }
    }

    #[test]
    fn engine_agrees_with_oracle(index in 0usize..3, atoms in prop::collection::vec((0usize..6, 1u32..4), 1..4)) {
        let group = [builtin::z2(), builtin::z3(), builtin::s3()][index].clone();
        let el = group.elements(16).unwrap();
        let mu = measure_from(&group, &el, &atoms);
        prop_assume!(mu.weights().iter().all(|w| *w.denom() <= 6.into()));
        let verdict = decide_regular(&group, &mu, &EngineOptions::default()).unwrap();
        let universe = generated_universe(&group, &mu, 16).unwrap();
        let found = brute_force_ginverse(&group, &mu, 8, &universe, &OracleBudget::default()).unwrap();
        prop_assert_eq!(verdict.is_regular(), found.is_some());
    }

    #[test]
    fn moore_penrose_idempotents(index in 0usize..8, a in raw_measure()) {
        let (group, el) = group_and_elements(index);
        let mu = measure_from(&group, &el, &a);
        let verdict = decide_regular(&group, &mu, &EngineOptions::default()).unwrap();
        if let Some(cert) = verdict.certificate {
            let dagger = moore_penrose(&group, &mu, &cert.ginverse).unwrap();
            prop_assert_eq!(&dagger, &cert.moore_penrose);
            for e in [convolve(&group, &mu, &dagger).unwrap(), convolve(&group, &dagger, &mu).unwrap()] {
                prop_assert_eq!(convolve(&group, &e, &e).unwrap(), e);
            }
        }
    }

    #[test]
    fn uniform_on_subgroup(index in 0usize..8, gens in prop::collection::vec(0usize..16, 0..3)) {
        let (group, el) = group_and_elements(index);
        let generators: Vec<GroupElement> = gens.iter().map(|&i| el[i % el.len()].clone()).collect();
        let subgroup = group.closure(&generators, 64).unwrap();
        let mu = Measure::uniform_on(&group, &subgroup).unwrap();
        prop_assert_eq!(convolve(&group, &mu, &mu).unwrap(), mu.clone());
        let verdict = decide_regular(&group, &mu, &EngineOptions::default()).unwrap();
        prop_assert_eq!(verdict.status, Status::Regular);
        prop_assert!(!verdict.subject.weights().iter().any(|w| w.is_zero()));
    }
}
