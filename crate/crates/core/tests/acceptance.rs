//! Acceptance suite: one PASS/FAIL line per criterion, with its time budget.
//!
//! Runs without the libtest harness so the lines are always printed. The
//! process fails if any criterion fails, except a failure listed in
//! `KNOWN_RED`, whose reason is printed alongside.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use bestchoice::game::win_count_from_annotation;
use bestchoice::stats::{
    bijection_231_to_213, catalan, lrm_distribution, narayana, results_row, stirling_row,
    verify_eq_321, verify_lemma_comb,
};
use bestchoice::{
    annotate, avoiders, bine_of_competitors, check_by_antichain_enumeration, check_cover_sum,
    expected_lrm, grow_game, is_strategy_indifferent, play, strike_projection, symmetric_group,
    ClassLabel, ExactRational, GrowthMap, Method, PermMultiset, Permutation, PrefixTree, StrikeSet,
};
use common::{Frac, Word};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5ec7e7a12e;
const RANDOM_CASES: usize = 200;
const ASYMPTOTE_TOLERANCE: f64 = 0.08;

/// Criterion 6 bundles exact closed forms with a convergence sanity check at
/// n = 8. The exact part is required; the convergence part cannot hold for
/// the two classes whose limit is 0, because 1/(H_8 + 1) ≈ 0.269 and
/// 2/(8 + 3) ≈ 0.182 are still far from 0 at that size.
const KNOWN_RED: &[(u32, &str)] = &[(
    6,
    "win probabilities for sym and av321 tend to 0 only like 1/ln n and 2/n; at n = 8 they are 0.269 and 0.182",
)];

type Check = Result<String, String>;
type Criterion = (u32, Duration, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn perm(w: &[u8]) -> Permutation {
    Permutation::new(w.to_vec()).expect("oracle words are permutations")
}

fn word(p: &Permutation) -> Word {
    p.entries().to_vec()
}

fn rational(f: Frac) -> ExactRational {
    ExactRational::new(f.0, f.1)
}

fn lib<T>(r: bestchoice::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Oracle win probability of `game` under every maximal antichain, as a set.
fn oracle_probabilities(game: &PermMultiset, antichains: &[BTreeSet<Word>]) -> BTreeSet<Frac> {
    antichains
        .iter()
        .map(|a| {
            let won: u64 = game
                .iter()
                .filter(|(p, _)| common::wins(p.entries(), a))
                .map(|(_, m)| m)
                .sum();
            Frac::new(won as u128, game.cardinality() as u128)
        })
        .collect()
}

fn criterion_1() -> Check {
    let bine = PermMultiset::from_perms(4, ["3142", "1423", "2314"].map(|s| perm(&common::w(s))))
        .map_err(|e| e.to_string())?;
    let game = lib(grow_game(&bine, GrowthMap::Phi))?;
    ensure(game.cardinality() == 10, || {
        format!("|I| = {}", game.cardinality())
    })?;
    let e = lib(expected_lrm(&bine))?;
    ensure(e == ExactRational::new(7, 3), || format!("E_LRM = {e}"))?;

    let probs = oracle_probabilities(&game, &common::maximal_antichains(5));
    ensure(probs == BTreeSet::from([Frac(3, 10)]), || {
        format!("oracle probabilities {probs:?}")
    })?;
    let verdict = lib(check_by_antichain_enumeration(&game))?;
    ensure(
        verdict.indifferent && verdict.win_probability == Some(ExactRational::new(3, 10)),
        || format!("library verdict {verdict}"),
    )?;

    let expected: BTreeMap<Word, u64> = [
        ("1", 3),
        ("12", 2),
        ("213", 1),
        ("2314", 1),
        ("31425", 1),
        ("14235", 1),
        ("23145", 1),
    ]
    .into_iter()
    .map(|(s, k)| (common::w(s), k))
    .collect();
    let tree = lib(annotate(&lib(PrefixTree::build(5))?, &game))?;
    let mut nonzero = BTreeMap::new();
    for p in tree.nodes() {
        let k = lib(tree.annotation(p))?.unwrap_or(0);
        if k > 0 {
            nonzero.insert(word(p), k);
        }
    }
    ensure(nonzero == expected, || format!("annotation {nonzero:?}"))?;
    Ok("|I| = 10, E_LRM = 7/3, all 157 antichains of P_5 give 3/10, annotation matches".into())
}

fn criterion_2() -> Check {
    let pat = perm(&[2, 3, 1]);
    let mut seen = Vec::new();
    for n in 3..=7usize {
        let game = lib(avoiders(n, &pat))?;
        let expect = Frac::new(common::catalan(n as u128 - 1), common::catalan(n as u128));
        ensure(
            expect == Frac::new(n as u128 + 1, 4 * n as u128 - 2),
            || format!("Catalan ratio disagrees with (N+1)/(4N-2) at {n}"),
        )?;
        ensure(
            catalan(n) == BigUint::from(common::catalan(n as u128)),
            || format!("C_{n}"),
        )?;
        let want = rational(expect);
        let v = lib(check_cover_sum(&game))?;
        ensure(
            v.indifferent && v.win_probability.as_ref() == Some(&want),
            || format!("cover sum at N = {n}: {v}"),
        )?;
        if n <= 5 {
            let v = lib(check_by_antichain_enumeration(&game))?;
            ensure(
                v.indifferent && v.win_probability.as_ref() == Some(&want),
                || format!("enumeration at N = {n}: {v}"),
            )?;
            let probs = oracle_probabilities(&game, &common::maximal_antichains(n));
            ensure(probs == BTreeSet::from([expect]), || {
                format!("oracle at N = {n}: {probs:?}")
            })?;
        }
        seen.push(want.to_string());
    }
    Ok(format!(
        "win probabilities for N = 3..7: {}",
        seen.join(", ")
    ))
}

fn random_s4_game(rng: &mut ChaCha8Rng, s4: &[Permutation]) -> PermMultiset {
    loop {
        let mut game = PermMultiset::new(4);
        if rng.random_bool(0.5) {
            for p in s4 {
                let k = rng.random_range(0..=3);
                if k > 0 {
                    game.insert(p.clone(), k).unwrap();
                }
            }
        } else {
            // Grown from a random bine, so indifferent verdicts get exercised;
            // sometimes nudged off indifference by one extra member.
            let mut bine = PermMultiset::new(3);
            for p in symmetric_group(3).unwrap() {
                let k = rng.random_range(0..=3);
                if k > 0 {
                    bine.insert(p, k).unwrap();
                }
            }
            if bine.is_empty() {
                continue;
            }
            let map = if rng.random_bool(0.5) {
                GrowthMap::Phi
            } else {
                GrowthMap::PhiAlt
            };
            game = grow_game(&bine, map).unwrap();
            if rng.random_bool(0.3) {
                let p = &s4[rng.random_range(0..s4.len())];
                if game.multiplicity(p) < 3 {
                    game.insert(p.clone(), 1).unwrap();
                }
            }
        }
        if !game.is_empty() {
            return game;
        }
    }
}

fn criterion_3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let s4: Vec<Permutation> = lib(symmetric_group(4))?.collect();
    let antichains = common::maximal_antichains(4);
    let mut indifferent = 0;
    for case in 0..RANDOM_CASES {
        let game = random_s4_game(&mut rng, &s4);
        let verdicts: Vec<_> = Method::ALL
            .iter()
            .map(|&m| lib(is_strategy_indifferent(&game, m)))
            .collect::<Result<_, _>>()?;
        let probs = oracle_probabilities(&game, &antichains);
        let oracle_prob = (probs.len() == 1).then(|| rational(*probs.first().unwrap()));
        for v in &verdicts {
            ensure(
                v.indifferent == oracle_prob.is_some() && v.win_probability == oracle_prob,
                || {
                    format!(
                        "case {case}: {} says {v}; oracle {probs:?}\n{}",
                        v.method,
                        game.to_text()
                    )
                },
            )?;
        }
        indifferent += usize::from(oracle_prob.is_some());
    }
    Ok(format!(
        "{RANDOM_CASES} games, {indifferent} indifferent; all three methods agree with the oracle"
    ))
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let s4: Vec<Permutation> = lib(symmetric_group(4))?.collect();
    let tree = lib(PrefixTree::build(5))?;
    for case in 0..RANDOM_CASES {
        let bine = loop {
            let chosen: Vec<_> = s4
                .iter()
                .filter(|_| rng.random_bool(0.35))
                .cloned()
                .collect();
            if !chosen.is_empty() {
                break lib(PermMultiset::from_perms(4, chosen))?;
            }
        };
        let total_lrm: u128 = bine
            .iter()
            .map(|(p, m)| (common::lrm_positions(p.entries()).len() as u128) * m as u128)
            .sum();
        let e = Frac::new(total_lrm, bine.cardinality() as u128);
        let want = rational(e.plus(Frac(1, 1)).recip());
        let mut annotations = Vec::new();
        for map in [GrowthMap::Phi, GrowthMap::PhiAlt] {
            let game = lib(grow_game(&bine, map))?;
            let v = lib(check_by_antichain_enumeration(&game))?;
            ensure(
                v.indifferent && v.win_probability.as_ref() == Some(&want),
                || {
                    format!(
                        "case {case} {map}: {v}, expected {want}\n{}",
                        bine.to_text()
                    )
                },
            )?;
            let back = lib(bine_of_competitors(&game))?;
            ensure(back.to_text() == bine.to_text(), || {
                format!("case {case} {map}: bine round trip\n{}", bine.to_text())
            })?;
            let annotated = lib(annotate(&tree, &game))?;
            let counts: Vec<_> = tree
                .nodes()
                .iter()
                .map(|p| annotated.annotation(p).map(|c| c.unwrap_or(0)))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            annotations.push(counts);
        }
        ensure(annotations[0] == annotations[1], || {
            format!(
                "case {case}: phi and phi-alt annotations differ\n{}",
                bine.to_text()
            )
        })?;
    }
    Ok(format!("{RANDOM_CASES} bines, both maps indifferent at 1/(E_LRM + 1), round trips exact, annotations equal"))
}

fn histogram(words: &[Word], n: usize) -> Vec<BigUint> {
    let mut h = vec![0u64; n];
    for w in words {
        h[common::lrm_positions(w).len() - 1] += 1;
    }
    h.into_iter().map(BigUint::from).collect()
}

fn criterion_5() -> Check {
    for n in 1..=8usize {
        let sym = lib(lrm_distribution(ClassLabel::Sym, n))?.counts;
        let mut by_cycles = vec![0u64; n];
        for w in common::perms(n) {
            by_cycles[common::cycles(&w) - 1] += 1;
        }
        let by_cycles: Vec<BigUint> = by_cycles.into_iter().map(BigUint::from).collect();
        ensure(sym == by_cycles && sym == stirling_row(n)[1..], || {
            format!("sym n = {n}: {sym:?}")
        })?;
        ensure(
            sym.iter().sum::<BigUint>() == BigUint::from(common::factorial(n as u128)),
            || format!("sym n = {n} row sum"),
        )?;

        let cat = |k: usize| BigUint::from(common::catalan(k as u128));
        let nar: Vec<BigUint> = (1..=n)
            .map(|k| {
                let (n, k) = (n as u128, k as u128);
                BigUint::from(common::binomial(n, k) * common::binomial(n, k - 1) / n)
            })
            .collect();
        let mut two_col = vec![BigUint::from(0u8); n];
        two_col[0] = cat(n - 1);
        if n >= 2 {
            two_col[1] = cat(n) - cat(n - 1);
        }
        let mut family = None;
        for class in ClassLabel::ALL
            .into_iter()
            .filter(|&c| c != ClassLabel::Sym)
        {
            let got = lib(lrm_distribution(class, n))?.counts;
            let pat = word(&class.pattern().unwrap());
            let oracle = histogram(&common::avoiders(n, &pat), n);
            ensure(got == oracle, || {
                format!("{class} n = {n}: {got:?} vs oracle {oracle:?}")
            })?;
            ensure(got.iter().sum::<BigUint>() == cat(n), || {
                format!("{class} n = {n} row sum")
            })?;
            match class {
                ClassLabel::Av321 | ClassLabel::Av312 => {
                    ensure(got == nar, || format!("{class} n = {n} vs Narayana"))?;
                    ensure(
                        nar == (1..=n).map(|k| narayana(n, k)).collect::<Vec<_>>(),
                        || format!("library Narayana row n = {n}"),
                    )?;
                }
                ClassLabel::Av123 => ensure(got == two_col, || format!("av123 n = {n}"))?,
                _ => match &family {
                    None => family = Some(got),
                    Some(f) => ensure(*f == got, || format!("{class} n = {n} differs in family"))?,
                },
            }
        }
    }
    Ok(
        "n = 1..8: Stirling (by cycle counts), Narayana, two-column, and av231 family rows match"
            .into(),
    )
}

struct Criterion6 {
    exact: Result<(), String>,
    convergence: Vec<(ClassLabel, f64, bool)>,
}

fn criterion_6_parts() -> Criterion6 {
    let exact = (|| {
        for n in 1..=8usize {
            let nn = n as u128;
            let c = |k: u128| common::catalan(k);
            for class in ClassLabel::FAMILIES {
                let closed = match class {
                    ClassLabel::Sym => common::harmonic(nn),
                    ClassLabel::Av123 => Frac(2, 1).minus(Frac::new(c(nn - 1), c(nn))),
                    ClassLabel::Av231 => Frac::new(c(nn + 1), c(nn)).minus(Frac(1, 1)),
                    _ => Frac::new(nn + 1, 2),
                };
                let words = match class.pattern() {
                    Some(p) => common::avoiders(n, &word(&p)),
                    None => common::perms(n),
                };
                let lrms: usize = words.iter().map(|w| common::lrm_positions(w).len()).sum();
                let enumerated = Frac::new(lrms as u128, words.len() as u128);
                ensure(enumerated == closed, || {
                    format!(
                        "{class} n = {n}: enumerated {} vs closed {}",
                        enumerated.show(),
                        closed.show()
                    )
                })?;
                let row = lib(results_row(class, n))?;
                ensure(row.expected_lrm == rational(closed), || {
                    format!("{class} n = {n}: library E = {}", row.expected_lrm)
                })?;
                ensure(
                    row.win_probability == rational(closed.plus(Frac(1, 1)).recip()),
                    || format!("{class} n = {n}: win probability {}", row.win_probability),
                )?;
            }
        }
        Ok(())
    })();
    let convergence = ClassLabel::FAMILIES
        .iter()
        .map(|&class| {
            let row = results_row(class, 8).expect("rank 8 is supported");
            let gap = (row.win_probability.to_f64() - class.asymptote().to_f64()).abs();
            (
                class,
                row.win_probability.to_f64(),
                gap <= ASYMPTOTE_TOLERANCE,
            )
        })
        .collect();
    Criterion6 { exact, convergence }
}

fn criterion_6() -> Check {
    let parts = criterion_6_parts();
    parts.exact.clone()?;
    let shown: Vec<String> = parts
        .convergence
        .iter()
        .map(|(c, p, ok)| {
            format!(
                "{c} {p:.6} vs {}{}",
                c.asymptote(),
                if *ok { "" } else { " (too far)" }
            )
        })
        .collect();
    let detail = format!(
        "exact closed forms hold for n = 1..8; at n = 8: {}",
        shown.join(", ")
    );
    if parts.convergence.iter().all(|(_, _, ok)| *ok) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_7() -> Check {
    let expect = [1u32, 2, 5, 17, 74];
    for n in 1..=8usize {
        let check = lib(verify_lemma_comb(n))?;
        ensure(check.holds, || format!("lemma fails at N = {n}: {check:?}"))?;
        // N appears last, or the entry right after N exceeds everything before N.
        let oracle = common::perms(n)
            .into_iter()
            .filter(|w| {
                let m = w.iter().position(|&x| x as usize == n).unwrap();
                m + 1 == n || w[..m].iter().all(|&x| x < w[m + 1])
            })
            .count();
        ensure(check.brute_force == BigUint::from(oracle), || {
            format!(
                "N = {n}: brute force {} vs oracle {oracle}",
                check.brute_force
            )
        })?;
        if n <= 5 {
            ensure(check.brute_force == BigUint::from(expect[n - 1]), || {
                format!("N = {n}: {} vs {}", check.brute_force, expect[n - 1])
            })?;
        }
    }
    for n in 1..=20usize {
        let check = lib(verify_eq_321(n))?;
        let nn = n as u128;
        let oracle = common::binomial(2 * nn - 1, nn);
        ensure(check.holds && check.rhs == BigUint::from(oracle), || {
            format!("eq 321 at N = {n}: {check:?}")
        })?;
    }
    Ok("lemma holds N = 1..8 (1, 2, 5, 17, 74, ...), brute force agrees; 321 identity holds N = 1..20".into())
}

fn criterion_8() -> Check {
    let p231 = perm(&[2, 3, 1]);
    let p213 = perm(&[2, 1, 3]);
    for n in 1..=9usize {
        let domain = lib(avoiders(n, &p231))?;
        ensure(
            domain.cardinality() as u128 == common::catalan(n as u128),
            || format!("|Av_{n}(231)| = {}", domain.cardinality()),
        )?;
        let mut image = BTreeSet::new();
        for (p, _) in domain.iter() {
            let q = lib(bijection_231_to_213(p))?;
            ensure(!common::contains(q.entries(), p213.entries()), || {
                format!("{p} -> {q} contains 213")
            })?;
            let mut a = common::lrm_values(p.entries());
            let mut b = common::lrm_values(q.entries());
            a.sort_unstable();
            b.sort_unstable();
            ensure(a == b, || format!("{p} -> {q} changes LRM values"))?;
            image.insert(q);
        }
        // Injective into a set of size C_n, hence onto.
        ensure(image.len() as u128 == common::catalan(n as u128), || {
            format!("n = {n}: image size {}", image.len())
        })?;
        if n <= 7 {
            let target: BTreeSet<Permutation> = common::avoiders(n, &[2, 1, 3])
                .iter()
                .map(|w| perm(w))
                .collect();
            ensure(image == target, || {
                format!("n = {n}: image is not Av_{n}(213)")
            })?;
        }
    }
    Ok("n = 1..9: injective onto Av_n(213), LRM values preserved".into())
}

fn criterion_9() -> Check {
    let mut plays = 0usize;
    for n in 1..=5usize {
        let tree = lib(PrefixTree::build(n))?;
        let oracle: BTreeSet<BTreeSet<Word>> = common::maximal_antichains(n).into_iter().collect();
        let listed: Vec<StrikeSet> = lib(tree.maximal_antichains(u64::MAX))?.collect();
        let listed_words: BTreeSet<BTreeSet<Word>> = listed
            .iter()
            .map(|a| a.iter().map(word).collect())
            .collect();
        ensure(
            listed.len() == oracle.len() && listed_words == oracle,
            || format!("P_{n}: {} listed, {} by oracle", listed.len(), oracle.len()),
        )?;
        ensure(
            tree.count_maximal_antichains() == BigUint::from(oracle.len()),
            || format!("P_{n}: count-only mode disagrees"),
        )?;
        let sn: Vec<Permutation> = lib(symmetric_group(n))?.collect();
        let uniform = lib(PermMultiset::from_perms(n, sn.iter().cloned()))?;
        let annotated = lib(annotate(&tree, &uniform))?;
        for (a, aw) in listed.iter().zip(
            listed
                .iter()
                .map(|a| a.iter().map(word).collect::<BTreeSet<_>>()),
        ) {
            ensure(
                tree.is_maximal_antichain(a) && common::is_maximal_antichain(&aw, n),
                || format!("{} is not a maximal antichain", a.words()),
            )?;
            let mut won = 0u64;
            for pi in &sn {
                let o = play(pi, a);
                let projected = a.contains(&strike_projection(pi));
                ensure(
                    o.won == projected && o.won == common::wins(pi.entries(), &aw),
                    || {
                        format!(
                            "{pi} under {}: play {}, projection {projected}",
                            a.words(),
                            o.won
                        )
                    },
                )?;
                won += u64::from(o.won);
                plays += 1;
            }
            let formula = lib(win_count_from_annotation(&annotated, a))?;
            ensure(won == formula, || {
                format!("{} on S_{n}: {won} vs {formula}", a.words())
            })?;
        }
    }
    Ok(format!("{plays} plays over S_1..S_5 and every maximal antichain agree with the projection and the annotation sum"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, Duration::from_secs(1), criterion_1),
        (2, Duration::from_secs(30), criterion_2),
        (3, Duration::from_secs(30), criterion_3),
        (4, Duration::from_secs(60), criterion_4),
        (5, Duration::from_secs(120), criterion_5),
        (6, Duration::from_secs(120), criterion_6),
        (7, Duration::from_secs(30), criterion_7),
        (8, Duration::from_secs(10), criterion_8),
        (9, Duration::from_secs(60), criterion_9),
    ];
    let mut unexpected = 0;
    for (id, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(d) if elapsed > budget => {
                Err(format!("{d}; but took {elapsed:.2?}, budget {budget:?}"))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {id} ({elapsed:.2?} of {budget:?}): {detail}"),
            Err(detail) => {
                println!("FAIL criterion {id} ({elapsed:.2?} of {budget:?}): {detail}");
                match KNOWN_RED.iter().find(|(k, _)| *k == id) {
                    Some((_, why)) => println!("     known red: {why}"),
                    None => unexpected += 1,
                }
            }
        }
    }
    // A known-red criterion only excuses its unattainable part.
    if let Err(e) = criterion_6_parts().exact {
        println!("FAIL criterion 6 exact part: {e}");
        unexpected += 1;
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} unexpected failure(s)");
        ExitCode::FAILURE
    }
}
