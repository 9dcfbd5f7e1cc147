use std::collections::BTreeMap;

use clasper_core::braid::{
    bing_braid, linking_number, milnor_representative, random_commutator, random_pure_braid, BraidWord,
};
use clasper_core::free_group::FreeWord;
use clasper_core::magnus::{
    first_nonvanishing_length, free_mu_table, magnus_expand, milnor_mu, mu_table, normalization_free,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Image of `x_g` under one Artin letter.
fn letter_image(n: usize, l: i32, g: usize) -> FreeWord {
    let i = l.unsigned_abs() as usize;
    let x = |k: usize| FreeWord::generator(n, k);
    match (l > 0, g) {
        (true, g) if g == i => x(i).mul(&x(i + 1)).mul(&x(i).inverse()),
        (true, g) if g == i + 1 => x(i),
        (false, g) if g == i => x(i + 1),
        (false, g) if g == i + 1 => x(i + 1).inverse().mul(&x(i)).mul(&x(i + 1)),
        _ => x(g),
    }
}

fn substitute(w: &FreeWord, n: usize, l: i32) -> FreeWord {
    let mut out = FreeWord::identity(n);
    for &a in w.letters() {
        let img = letter_image(n, l, a.unsigned_abs() as usize);
        out.extend(&if a > 0 { img } else { img.inverse() });
    }
    out
}

/// act(l₁⋯l_m)(x) = act(l₁)(⋯act(l_m)(x)), evaluated innermost first.
fn artin_oracle(u: &BraidWord, g: usize) -> FreeWord {
    let n = u.strands();
    let mut w = FreeWord::generator(n, g);
    for &l in u.letters().iter().rev() {
        w = substitute(&w, n, l);
    }
    w
}

/// Sparse expansion by repeated multiplication of monomial maps.
fn magnus_oracle(w: &FreeWord, cutoff: usize) -> BTreeMap<Vec<u16>, i64> {
    let mut s: BTreeMap<Vec<u16>, i64> = BTreeMap::from([(vec![], 1)]);
    for &l in w.letters() {
        let g = l.unsigned_abs() as u16;
        // x ↦ 1 + X, x⁻¹ ↦ Σ (−X)^k
        let factor: Vec<(Vec<u16>, i64)> = if l > 0 {
            vec![(vec![], 1), (vec![g], 1)]
        } else {
            (0..=cutoff).map(|k| (vec![g; k], if k % 2 == 0 { 1 } else { -1 })).collect()
        };
        let mut next = BTreeMap::new();
        for (m, c) in &s {
            for (f, d) in &factor {
                if m.len() + f.len() <= cutoff {
                    let mut key = m.clone();
                    key.extend(f);
                    *next.entry(key).or_insert(0) += c * d;
                }
            }
        }
        next.retain(|_, v| *v != 0);
        s = next;
    }
    s
}

fn random_braid(rng: &mut ChaCha8Rng, n: usize, len: usize) -> BraidWord {
    let letters: Vec<i32> = (0..len).map(|_| rng.gen_range(1..n as i32) * if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
    BraidWord::new(n, letters).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn artin_action_matches_substitution(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=5);
        let len = rng.gen_range(0..=8);
        let u = random_braid(&mut rng, n, len);
        let act = u.artin_action();
        for g in 1..=n {
            prop_assert_eq!(&act.images[g - 1], &artin_oracle(&u, g));
        }
        let v = random_braid(&mut rng, n, 4);
        let uv = u.compose(&v).unwrap();
        let (au, av, auv) = (u.artin_action(), v.artin_action(), uv.artin_action());
        for g in 0..n {
            prop_assert_eq!(&auv.images[g], &au.apply(&av.images[g]));
        }
    }

    #[test]
    fn magnus_matches_sparse_oracle(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=3);
        let letters: Vec<i32> = (0..rng.gen_range(0..10)).map(|_| rng.gen_range(1..=n as i32) * if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
        let w = FreeWord::from_letters(n, letters);
        let cutoff = rng.gen_range(1..=4);
        let s = magnus_expand(&w, cutoff).unwrap();
        let got: BTreeMap<Vec<u16>, i64> = s.terms().map(|(m, c)| (m.clone(), c)).collect();
        prop_assert_eq!(got, magnus_oracle(&w, cutoff));
    }

    #[test]
    fn inverse_braid_undoes_action(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=5);
        let u = random_braid(&mut rng, n, 10);
        let (a, b) = (u.artin_action(), u.inverse().artin_action());
        for g in 1..=n {
            prop_assert_eq!(a.apply(&b.images[g - 1]), FreeWord::generator(n, g));
        }
    }

    #[test]
    fn series_route_matches_word_route(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=4);
        let len = rng.gen_range(0..=3);
        let u = random_pure_braid(&mut rng, n, len);
        let words = mu_table(&u, 4).unwrap();
        let series = free_mu_table(&u, 4).unwrap();
        for (i, v) in &series.entries {
            prop_assert_eq!(words.get(i), Some(*v));
        }
        prop_assert_eq!(series.entries.len(), words.entries.keys().filter(|i| normalization_free(i)).count());
    }

    #[test]
    fn length_two_mu_is_linking_number(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=5);
        let len = rng.gen_range(0..=5);
        let u = random_pure_braid(&mut rng, n, len);
        for i in 1..=n {
            for j in 1..=n {
                if i != j {
                    prop_assert_eq!(milnor_mu(&u, &[i, j]).unwrap(), linking_number(&u, i, j));
                }
            }
        }
    }

    #[test]
    fn commutators_do_not_change_short_mu(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=5);
        let m = rng.gen_range(2..=4);
        let len = rng.gen_range(0..=4);
        let u = random_pure_braid(&mut rng, n, len);
        let c = random_commutator(&mut rng, n, m);
        prop_assert!(c.is_pure());
        prop_assert_eq!(free_mu_table(&u.compose(&c).unwrap(), m).unwrap(), free_mu_table(&u, m).unwrap());
        prop_assert_eq!(first_nonvanishing_length(&c, m).unwrap(), None);
    }

    #[test]
    fn doubling_then_deleting_restores(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=4);
        let len = rng.gen_range(0..=3);
        let u = random_pure_braid(&mut rng, n, len);
        let i = rng.gen_range(1..=n);
        let d = u.double_strand(i).unwrap();
        prop_assert_eq!(d.strands(), n + 1);
        prop_assert!(d.is_pure());
        let back = d.delete_strands(&[i + 1]).unwrap();
        prop_assert!(back.compose(&u.inverse()).unwrap().is_trivial());
    }
}

#[test]
fn braid_relations_hold() {
    for n in 3..=5 {
        for i in 1..n as i32 - 1 {
            let w = BraidWord::new(n, [i, i + 1, i, -(i + 1), -i, -(i + 1)]).unwrap();
            assert!(w.is_trivial());
        }
        let far = BraidWord::new(n.max(4), [1, 3, -1, -3]).unwrap();
        assert!(far.is_trivial());
        assert!(!BraidWord::new(n, [1, 2, -1, -2]).unwrap().is_trivial());
    }
}

#[test]
fn bing_braid_lemma_conditions() {
    for k in 1..=4 {
        let b = bing_braid(k).unwrap();
        assert_eq!(b.strands(), 2 * k + 2);
        assert!(b.is_pure());
        assert!(b.letters().iter().all(|l| l.abs() != 1), "strand 1 moves at k={k}");
        for i in 1..=k + 1 {
            assert!(b.delete_strands(&[2 * i - 1, 2 * i]).unwrap().is_trivial(), "pair {i} at k={k}");
        }
        assert_eq!(first_nonvanishing_length(&b, k).unwrap(), None);
        if k <= 3 {
            assert_eq!(first_nonvanishing_length(&b, k + 2).unwrap(), Some(k + 1));
        }
    }
}

#[test]
fn milnor_representatives() {
    assert_eq!(milnor_mu(&milnor_representative(1).unwrap(), &[2, 1]).unwrap(), 1);
    for k in 1..=4 {
        let w = milnor_representative(k).unwrap();
        assert_eq!(w.strands(), k + 1);
        assert_eq!(first_nonvanishing_length(&w, k + 1).unwrap(), Some(k + 1));
        let t = free_mu_table(&w, k + 1).unwrap();
        assert!(t.entries.iter().any(|(i, v)| i.len() == k + 1 && v.abs() == 1));
        if k >= 2 {
            for i in 1..=k + 1 {
                assert!(w.delete_strands(&[i]).unwrap().is_trivial(), "strand {i} at k={k}");
            }
        }
    }
}
