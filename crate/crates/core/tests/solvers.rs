use dealab::dea::{dea_eval, g_mul, Triple, Word};
use dealab::solvers::{
    bit_plane_solve, brute_force_solve, confirm_probability, mult_solve, theorem1_alternate_queries,
    theorem1_queries, MulTriple, TripleSet,
};
use dealab::tables::{carry_table, key_table, verify_tables, PUBLISHED_CARRY_TABLE, PUBLISHED_KEY_TABLE};
use dealab::Error;

fn byte_set(triples: &[(u8, u8, u8)]) -> TripleSet {
    TripleSet::from_triples(8, triples.iter().map(|&(a, b, y)| Triple::bytes(a, b, y))).unwrap()
}

#[test]
fn enumerated_tables_match_published() {
    assert_eq!(key_table(), PUBLISHED_KEY_TABLE);
    let derived = carry_table().map(|row| row.map(|c| c.to_string()));
    assert_eq!(derived, PUBLISHED_CARRY_TABLE.map(|row| row.map(|v| v.to_string())));
    let r = verify_tables();
    assert!(r.is_consistent(), "{:?}", r.mismatches);
    assert_eq!(r.cells_checked, 64);
}

#[test]
fn theorem1_query_values() {
    let [(a0, b0), (a1, b1)] = theorem1_queries(8).unwrap();
    assert_eq!((a0.value(), b0.value(), a1.value(), b1.value()), (0x00, 0xAA, 0xAA, 0x55));
    let [(c0, d0), (c1, d1)] = theorem1_alternate_queries(8).unwrap();
    assert_eq!((c0.value(), d0.value(), c1.value(), d1.value()), (0xAA, 0x00, 0x00, 0x55));
}

#[test]
fn theorem1_pins_every_class_at_eight_bits() {
    for k in 0..128u32 {
        let kw = Word::new(k, 8).unwrap();
        for qs in [theorem1_queries(8).unwrap(), theorem1_alternate_queries(8).unwrap()] {
            let set = TripleSet::from_triples(8, qs.iter().map(|&(a, b)| Triple::new(a, b, dea_eval(a, b, kw).unwrap()).unwrap()))
                .unwrap();
            assert_eq!(brute_force_solve(&set), vec![kw]);
            let est = bit_plane_solve(&set);
            assert_eq!((est.value, est.determined), (kw, 0x7f));
        }
    }
}

#[test]
fn brute_force_golden_candidates() {
    // 3 + k and 5 + k differ in 6 exactly when k = 0 or 7 mod 8 (checked by hand enumeration)
    let set = TripleSet::from_triples(8, [Triple::new(Word::new(3, 8).unwrap(), Word::new(5, 8).unwrap(), Word::new(6, 8).unwrap()).unwrap()]).unwrap();
    let got: Vec<u32> = brute_force_solve(&set).iter().map(|w| w.value()).collect();
    let expect: Vec<u32> = (0..128).filter(|k| k % 8 == 0 || k % 8 == 7).collect();
    assert_eq!(got, expect);
}

#[test]
fn empty_set_leaves_everything_open() {
    let est = bit_plane_solve(&TripleSet::new(8).unwrap());
    assert_eq!((est.value.value(), est.determined), (0, 0));
    assert_eq!(brute_force_solve(&TripleSet::new(8).unwrap()).len(), 128);
}

#[test]
fn zero_difference_triple_determines_nothing() {
    let est = bit_plane_solve(&byte_set(&[(7, 7, 0), (200, 200, 0)]));
    assert_eq!(est.determined, 0);
}

#[test]
fn width_mismatch_is_an_error() {
    let mut set = TripleSet::new(8).unwrap();
    let t4 = Triple::new(Word::new(1, 4).unwrap(), Word::new(2, 4).unwrap(), Word::new(3, 4).unwrap()).unwrap();
    assert!(matches!(set.push(t4), Err(Error::WidthMismatch { .. })));
    assert!(Triple::new(Word::new(1, 4).unwrap(), Word::byte(2), Word::byte(3)).is_err());
}

#[test]
fn confirm_probability_formula() {
    assert!((confirm_probability(0, 1, 8).unwrap() - 0.5).abs() < 1e-12);
    assert!((confirm_probability(6, 3, 8).unwrap() - (0.875f64).powi(7)).abs() < 1e-12);
    assert!(confirm_probability(7, 3, 8).is_err());
}

#[test]
fn mult_solve_contradiction_is_inconsistent() {
    let k = 77u8;
    let make = |alpha: u8, sum: u64| MulTriple { alpha, sum, y: alpha.wrapping_add(k) ^ g_mul(sum, k) };
    // sum 0 makes the relation plain addition, so one triple pins k
    assert_eq!(mult_solve(&[make(10, 0)]).unwrap().candidates, vec![k]);
    // a triple that leaves several candidates, then the same inputs with a different output
    let t = (1..100_000u64)
        .map(|s| make(10, s * 977))
        .find(|t| (0..=255u8).filter(|&c| t.holds(c)).count() > 1)
        .expect("an ambiguous triple exists");
    let clash = MulTriple { y: t.y ^ 1, ..t };
    assert!(matches!(mult_solve(&[t, clash]), Err(Error::Inconsistent)));
}

#[test]
fn mult_solve_two_triples_usually_unique() {
    let mut unique = 0;
    let mut rng = dealab::keysched::ByteStream::new(42);
    for _ in 0..500 {
        let k = rng.next_byte();
        let ts: Vec<MulTriple> = (0..2)
            .map(|_| {
                let (alpha, sum) = (rng.next_byte(), u64::from(rng.next_u32() % 4_000_000));
                MulTriple { alpha, sum, y: alpha.wrapping_add(k) ^ g_mul(sum, k) }
            })
            .collect();
        let sol = mult_solve(&ts).unwrap();
        assert!(sol.candidates.contains(&k));
        unique += usize::from(sol.is_unique());
    }
    assert!(unique > 450, "{unique}/500 unique");
}
