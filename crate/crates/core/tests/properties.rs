use proptest::prelude::*;

use cardminsat::brute::{cms_bruteforce, enumerate_models};
use cardminsat::classify::{is_affine, is_complementive, is_horn};
use cardminsat::format::{parse_formula, parse_relations, write_formula, write_relations, FormulaDoc};
use cardminsat::linear::{affine_cms_summary, gauss_solve, XorEquation};
use cardminsat::reductions::{lift_model, reduce_or2_to_nae3, restrict_model};
use cardminsat::solvers::{solve, EngineChoice};
use cardminsat::{build_named_relation, relation_by_name, Error, Family, Formula, Relation};

fn rel(name: &str) -> Relation {
    relation_by_name(name).unwrap()
}

fn relation_strategy() -> impl Strategy<Value = Relation> {
    (1usize..=5).prop_flat_map(|k| {
        proptest::collection::btree_set(0u32..(1 << k), 1..=(1usize << k))
            .prop_map(move |slots| Relation::from_slots("R", k, slots).unwrap())
    })
}

/// Formula over `x0..x{n-1}` built from the given relations.
fn formula_strategy(names: &'static [&'static str], max_vars: usize, max_m: usize) -> impl Strategy<Value = Formula> {
    (1..=max_vars).prop_flat_map(move |n| {
        let atom = (0..names.len()).prop_flat_map(move |ri| {
            let k = rel(names[ri]).arity();
            (Just(ri), proptest::collection::vec(0..n, k))
        });
        proptest::collection::vec(atom, 1..=max_m).prop_map(move |atoms| {
            let mut b = Formula::builder();
            for (ri, vs) in atoms {
                let vs: Vec<String> = vs.iter().map(|v| format!("x{v}")).collect();
                b.constrain(&rel(names[ri]), &vs).unwrap();
            }
            b.build()
        })
    })
}

fn no_imports(_: &str) -> cardminsat::Result<Vec<Relation>> {
    Err(Error::Precondition("no imports".into()))
}

fn renamed(f: &Formula, tag: &str) -> Formula {
    f.renamed_vars(|v| format!("{tag}{v}")).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn relation_text_round_trip(r in relation_strategy()) {
        let text = write_relations(std::slice::from_ref(&r));
        let back = parse_relations(&text).unwrap();
        prop_assert_eq!(back.len(), 1);
        prop_assert!(back[0].same_tuples(&r));
        prop_assert_eq!(write_relations(&back), text);
    }

    #[test]
    fn formula_text_round_trip(f in formula_strategy(&["OR2", "XOR3", "NAE3", "T"], 6, 6)) {
        let doc = FormulaDoc::new(f.clone(), Some(f.universe()[0].clone()));
        let text = write_formula(&doc);
        let back = parse_formula(&text, &mut no_imports).unwrap();
        prop_assert_eq!(back.formula.universe(), f.universe());
        prop_assert_eq!(back.formula.to_string(), f.to_string());
        prop_assert_eq!(write_formula(&back), text);
    }

    #[test]
    fn answers_ignore_names_and_constraint_order(f in formula_strategy(&["OR2", "NAND2", "XOR3"], 7, 7), seed in any::<u64>()) {
        let mut cs = f.constraints().to_vec();
        let len = cs.len();
        cs.rotate_left(seed as usize % len);
        let shuffled = renamed(&f.with_constraints(cs), "y");
        for q in f.universe() {
            let a = cms_bruteforce(&f, q).unwrap().key();
            let b = cms_bruteforce(&shuffled, &format!("y{q}")).unwrap().key();
            prop_assert_eq!(a, b);
            let c = solve(&shuffled, &format!("y{q}"), EngineChoice::Auto).unwrap().answer.key();
            prop_assert_eq!(a, c);
        }
    }

    #[test]
    fn dispatch_matches_enumeration(f in formula_strategy(&["IMPL", "NAND2", "T", "F", "EQ", "NEQ", "OR2", "XOR3"], 9, 9)) {
        for q in f.universe() {
            let want = cms_bruteforce(&f, q).unwrap().key();
            let got = solve(&f, q, EngineChoice::Auto).unwrap();
            prop_assert_eq!(got.answer.key(), want, "engine {}", got.engine);
        }
    }

    #[test]
    fn gauss_agrees_with_enumeration(
        n in 1usize..=12,
        eqs in proptest::collection::vec((proptest::collection::vec(0usize..12, 0..=4), any::<bool>()), 0..=12),
    ) {
        let eqs: Vec<XorEquation> = eqs
            .into_iter()
            .map(|(vs, rhs)| XorEquation::new(vs.into_iter().map(|v| v % n).collect(), rhs))
            .collect();
        let any_model = (0u32..1 << n).any(|bits| {
            let vals: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
            eqs.iter().all(|e| e.holds(&vals))
        });
        match gauss_solve(n, &eqs) {
            Some(sol) => {
                prop_assert!(any_model);
                prop_assert!(eqs.iter().all(|e| e.holds(&sol)));
            }
            None => prop_assert!(!any_model),
        }
    }

    #[test]
    fn affine_summary_matches_enumeration(f in formula_strategy(&["XOR3", "XOR2", "EVEN2", "EVEN3", "T", "F"], 12, 12)) {
        for q in f.universe() {
            let want = cms_bruteforce(&f, q).unwrap().key();
            let s = affine_cms_summary(&f, q).unwrap();
            prop_assert_eq!((s.verdict, s.min_weight), want);
            prop_assert_eq!(s.satisfiable, want.1.is_some());
        }
    }

    #[test]
    fn complementive_means_closed_under_negation(r in relation_strategy()) {
        let k = r.arity();
        let flipped = r.tuples().all(|t| r.contains_tuple(&t.iter().map(|b| !b).collect::<Vec<_>>()));
        prop_assert_eq!(is_complementive(&r), flipped);
        let tuples: Vec<Vec<bool>> = r.tuples().collect();
        let and_closed = tuples.iter().all(|a| {
            tuples.iter().all(|b| r.contains_tuple(&(0..k).map(|i| a[i] & b[i]).collect::<Vec<_>>()))
        });
        prop_assert_eq!(is_horn(&r), and_closed);
        let xor_closed = tuples.iter().all(|a| {
            tuples.iter().all(|b| {
                tuples.iter().all(|c| r.contains_tuple(&(0..k).map(|i| a[i] ^ b[i] ^ c[i]).collect::<Vec<_>>()))
            })
        });
        prop_assert_eq!(is_affine(&r), xor_closed);
    }

    #[test]
    fn family_members_follow_their_predicate(k in 1usize..=8, bits in any::<u32>()) {
        let tuple: Vec<bool> = (0..k).map(|i| bits >> i & 1 == 1).collect();
        let ones = tuple.iter().filter(|&&b| b).count();
        let member = |f: Family| build_named_relation(f, Some(k)).unwrap().contains_tuple(&tuple);
        prop_assert_eq!(member(Family::Or), ones > 0);
        prop_assert_eq!(member(Family::Nand), ones < k);
        prop_assert_eq!(member(Family::Xor), ones % 2 == 1);
        prop_assert_eq!(member(Family::Even), ones % 2 == 0);
    }

    #[test]
    fn or2_models_lift_and_restrict(f in formula_strategy(&["OR2"], 5, 5)) {
        let q = f.universe()[0].clone();
        let red = reduce_or2_to_nae3(&f, &q).unwrap();
        let offset = red.stats.declared_weight_offset.unwrap();
        for sigma in enumerate_models(&f).unwrap() {
            let up = lift_model(&red, &sigma).unwrap();
            prop_assert!(red.formula.satisfies(&up));
            prop_assert_eq!(up.weight(), sigma.weight() + offset);
            prop_assert_eq!(restrict_model(&red, &up).unwrap(), sigma);
        }
    }
}
