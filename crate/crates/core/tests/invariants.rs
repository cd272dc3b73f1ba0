use pathmonoid_core::census::{count_iend, count_paut, enumerate_iend, enumerate_paut};
use pathmonoid_core::factorize::{canonical_delta, factor_iend};
use pathmonoid_core::genwords::{alphabet_iend, alphabet_paut, make_generator, GeneratorSymbol};
use pathmonoid_core::greens::{
    h_related, j_related, l_related, oracle_relation, r_related, same_block_images, Relation,
};
use pathmonoid_core::rankcheck::{closure, is_generating, MonoidSet};
use pathmonoid_core::{is_paut, Family, PartialInjection};

fn pi(s: &str) -> PartialInjection {
    s.parse().unwrap()
}

#[test]
fn reference_sizes() {
    let paut = [2u64, 7, 22, 71, 252, 935, 3614, 14567, 60828, 262415, 1166782, 5334247];
    let iend = [2u64, 7, 26, 105, 458, 2127, 10450, 53937, 291154, 1636535, 9548362, 57654233];
    for n in 1..=12u32 {
        assert_eq!(count_paut(n).unwrap(), paut[n as usize - 1].into(), "paut n={n}");
        assert_eq!(count_iend(n).unwrap(), iend[n as usize - 1].into(), "iend n={n}");
    }
}

#[test]
fn relations_are_equivalences_and_nest() {
    for n in 1..=4 {
        let m = enumerate_iend(n).unwrap();
        for a in &m {
            for rel in Relation::ALL {
                assert!(rel.holds(a, a).unwrap());
            }
            for b in &m {
                let l = l_related(a, b).unwrap();
                let r = r_related(a, b).unwrap();
                let h = h_related(a, b).unwrap();
                let j = j_related(a, b).unwrap();
                assert_eq!(l, l_related(b, a).unwrap());
                assert_eq!(r, r_related(b, a).unwrap());
                assert_eq!(j, j_related(b, a).unwrap());
                assert_eq!(h, l && r);
                assert!(!(l || r) || j, "{a} {b}");
                assert_eq!(l, same_block_images(a, b).unwrap());
            }
        }
    }
}

#[test]
fn relations_are_transitive_small() {
    let m = enumerate_iend(3).unwrap();
    for rel in Relation::ALL {
        for a in &m {
            for b in &m {
                if !rel.holds(a, b).unwrap() {
                    continue;
                }
                for c in &m {
                    if rel.holds(b, c).unwrap() {
                        assert!(rel.holds(a, c).unwrap(), "{rel}: {a} {b} {c}");
                    }
                }
            }
        }
    }
}

#[test]
fn greens_examples() {
    let w = pi("n=3;1>1,3>2");
    // a⁻¹b for b = {1>2,3>1} reverses the interval {1,2}, a partial automorphism
    let b = pi("n=3;1>2,3>1");
    assert_eq!(w.inverse().then(&b), pi("n=3;1>2,2>1"));
    assert!(r_related(&w, &b).unwrap());
    let m = enumerate_iend(3).unwrap();
    let r = oracle_relation(&m, Relation::R).unwrap();
    assert!(r.classes.iter().any(|c| c.contains(&w) && c.contains(&b)));
    let p2 = enumerate_paut(2).unwrap();
    let j = oracle_relation(&p2, Relation::J).unwrap();
    let id = PartialInjection::identity(2).unwrap();
    let tau = make_generator(GeneratorSymbol::Tau, 2).unwrap();
    assert!(j.classes.contains(&vec![id, tau]) || j.classes.contains(&vec![tau, id]));
}

#[test]
fn conjugation_by_tau_matches_oracle() {
    for n in 1..=4 {
        let m = enumerate_iend(n).unwrap();
        let j = oracle_relation(&m, Relation::J).unwrap();
        let tau = make_generator(GeneratorSymbol::Tau, n).unwrap();
        for a in &m {
            let b = tau.then(a).then(&tau);
            assert!(j_related(a, &b).unwrap());
            assert!(j.classes.iter().any(|c| c.contains(a) && c.contains(&b)));
        }
    }
}

#[test]
fn deltas_for_all_small_endomorphisms() {
    for n in 1..=6 {
        for b in enumerate_iend(n).unwrap() {
            let d = canonical_delta(&b).unwrap();
            assert!(is_paut(&d));
            assert_eq!(d.domain_mask(), b.image_mask());
            let m = b.image_intervals().len() as u32;
            assert!(d.image().iter().all(|&v| v + 1 <= b.rank() + m), "{b}");
        }
    }
    assert_eq!(canonical_delta(&pi("n=7;2>2,3>3,6>6")).unwrap(), pi("n=7;2>1,3>2,6>4"));
}

#[test]
fn witness_factors_through_beta_two() {
    let b = pi("n=3;1>1,3>2");
    let word = factor_iend(&b).unwrap();
    assert_eq!(word.eval(), b);
    assert_eq!(make_generator(GeneratorSymbol::Beta(2), 3).unwrap(), b);
}

#[test]
fn closures_match_enumeration() {
    for n in 3..=6 {
        let gens = alphabet_paut(n).unwrap().elements();
        let target = MonoidSet::of_family(Family::PAut, n, 8).unwrap();
        assert_eq!(closure(&gens, n).unwrap(), target);
        assert!(is_generating(&gens, &target).unwrap());
        let again = closure(target.elements(), n).unwrap();
        assert_eq!(again, target);
    }
    for n in 3..=5 {
        let gens = alphabet_iend(n).unwrap().elements();
        let target = MonoidSet::of_family(Family::IEnd, n, 8).unwrap();
        assert_eq!(closure(&gens, n).unwrap(), target);
    }
}

#[test]
fn removing_one_letter_loses_generation() {
    for n in 4..=6 {
        let gens = alphabet_paut(n).unwrap().elements();
        let target = MonoidSet::of_family(Family::PAut, n, 8).unwrap();
        for skip in 0..gens.len() {
            let mut rest = gens.clone();
            rest.remove(skip);
            assert!(!is_generating(&rest, &target).unwrap(), "n={n} without {skip}");
        }
    }
}

#[test]
fn corank_one_endomorphisms() {
    for n in 2..=6 {
        let full = (1u64 << n) - 1;
        let ends = [full & !(1 << (n - 1)), full & !1];
        for a in enumerate_iend(n).unwrap() {
            if ends.contains(&a.domain_mask()) {
                assert!(is_paut(&a), "{a}");
            }
            if a.rank() == n - 1 && !is_paut(&a) {
                assert!(ends.contains(&a.image_mask()), "{a}");
            }
        }
    }
}
