//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use moran_spectral::convolution::{finite_convolution, omega_factors, original_factors, rearrange, rearranged_prefix};
use moran_spectral::fourier::{empirical_cf_many, equivalence_gap, grid, nu_hat};
use moran_spectral::moran::refinement_check;
use moran_spectral::numtheory::{v2_u64, DigitSet, Rational};
use moran_spectral::spectra::{
    bizero_check, build_spectrum, compose_triples, q_function, HadamardTriple, Transform,
};
use moran_spectral::spectrality::{bernoulli_s, decide, decompose_spectrum, default_modulus, Rule, Status};
use moran_spectral::ParamSeq;

fn report(n: u32, name: &str, ok: bool, elapsed: Duration, limit: Duration, detail: &str) {
    let timely = elapsed <= limit;
    let status = if ok && timely { "PASS" } else { "FAIL" };
    println!(
        "acceptance {n} [{name}]: {status} ({detail}; {:.3}s, limit {}s)",
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    assert!(ok, "criterion {n} failed: {detail}");
    assert!(timely, "criterion {n} exceeded {}s", limit.as_secs());
}

/// Random valid parameters; `min_p..=max_p` for every `p_k`.
fn random_params(rng: &mut ChaCha8Rng, min_p: u64, max_p: u64) -> ParamSeq {
    let entry = |rng: &mut ChaCha8Rng| {
        let p = rng.gen_range(min_p..=max_p);
        (2 * p + rng.gen_range(0..5), p)
    };
    let pre: Vec<(u64, u64)> = (0..rng.gen_range(0..3)).map(|_| entry(rng)).collect();
    let per: Vec<(u64, u64)> = (0..rng.gen_range(1..3)).map(|_| entry(rng)).collect();
    let (bp, pp): (Vec<u64>, Vec<u64>) = pre.into_iter().unzip();
    let (bq, pq): (Vec<u64>, Vec<u64>) = per.into_iter().unzip();
    ParamSeq::new(bp, bq, pp, pq).unwrap()
}

/// `v_2` computed by repeated halving.
fn v2_naive(mut n: u64) -> i64 {
    let mut v = 0;
    while n % 2 == 0 {
        n /= 2;
        v += 1;
    }
    v
}

#[test]
fn criterion_1_bernoulli_s_values() {
    let start = Instant::now();
    let s = ParamSeq::with_b(vec![8, 8, 7], vec![8], 1).unwrap();
    let got: Vec<i64> = (1..=10).map(|k| bernoulli_s(&s, k).unwrap().value).collect();
    let mut want = vec![6, 5];
    want.extend((3..=10).map(|k| 3 * k));
    // Independent recomputation from the definition.
    let oracle: Vec<i64> = (1..=10)
        .map(|k| (1..=k + 1).map(|i| v2_naive(s.b(i))).sum::<i64>() - v2_naive(s.b(k + 1) - 1))
        .collect();
    assert_eq!(v2_u64(8).finite(), Some(3));
    let v = decide(&s);
    let ok = got == want && oracle == want && v.status == Status::Spectral && v.rule == Some(Rule::BernoulliValuations);
    report(1, "bernoulli s-values", ok, start.elapsed(), Duration::from_secs(1), &format!("s = {got:?}, verdict {:?}", v.status));
}

#[test]
fn criterion_2_biconditional_regime() {
    let start = Instant::now();
    let mut ok = decide(&ParamSeq::constant(8, 2).unwrap()).status == Status::Spectral;
    let bad = ParamSeq::with_b(vec![8, 8, 6], vec![8], 2).unwrap();
    let v = decide(&bad);
    ok &= v.status == Status::NotSpectral && v.divisibility_witness().as_deref() == Some("n_3=4 ∤ b_3=6");

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut flips = 0;
    for _ in 0..20 {
        // Prefix b_1, b_2 with b_2 even; period entries govern k >= 3.
        let prefix = vec![rng.gen_range(4..20), 2 * rng.gen_range(2..10)];
        let mut period: Vec<u64> = (0..rng.gen_range(1..4)).map(|_| 4 * rng.gen_range(1..6)).collect();
        let expected = |b: &[u64]| b.iter().all(|x| x % 4 == 0);
        let verdict = |per: &[u64]| decide(&ParamSeq::with_b(prefix.clone(), per.to_vec(), 2).unwrap()).status;
        ok &= verdict(&period) == Status::Spectral && expected(&period);
        let i = rng.gen_range(0..period.len());
        let saved = period[i];
        period[i] = if rng.gen_bool(0.5) { 4 * rng.gen_range(1..6) + 2 } else { 4 * rng.gen_range(1..6) + 1 };
        ok &= verdict(&period) == Status::NotSpectral && !expected(&period);
        period[i] = saved;
        ok &= verdict(&period) == Status::Spectral;
        flips += 2;
    }
    report(2, "divisibility biconditional", ok, start.elapsed(), Duration::from_secs(1), &format!("{flips} flips checked"));
}

#[test]
fn criterion_3_equivalence_identity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let ts = grid(-2.0, 2.0, 101);
    let mut worst = 0.0f64;
    let mut ok = true;
    for _ in 0..5 {
        let s = random_params(&mut rng, 1, 4);
        for &t in &ts {
            let g = equivalence_gap(&s, t, 24);
            ok &= g.gap <= g.bound && g.gap < 1e-6;
            worst = worst.max(g.gap);
        }
    }
    report(3, "mu/nu equivalence", ok, start.elapsed(), Duration::from_secs(10), &format!("max gap {worst:e}"));
}

#[test]
fn criterion_4_two_path_fourier() {
    let start = Instant::now();
    let ts = grid(-2.0, 2.0, 101);
    let mut worst = 0.0f64;
    let mut atoms = 0;
    for s in [ParamSeq::constant(4, 1).unwrap(), ParamSeq::with_b(vec![8], vec![6, 3], 1).unwrap()] {
        let m = finite_convolution(&original_factors(&s, 20), 20);
        atoms = atoms.max(m.len());
        let emp = empirical_cf_many(&m, &ts);
        for (&t, e) in ts.iter().zip(emp) {
            worst = worst.max((nu_hat(&s, t, 20).value - e).norm());
        }
    }
    report(
        4,
        "two-path fourier",
        worst < 1e-8,
        start.elapsed(),
        Duration::from_secs(30),
        &format!("max difference {worst:e}, up to {atoms} atoms"),
    );
}

#[test]
fn criterion_5_finite_spectral_pair() {
    let start = Instant::now();
    let s = ParamSeq::constant(8, 2).unwrap();
    let lam = build_spectrum(&s, 3).unwrap();
    let seq = rearranged_prefix(&s, 3);
    let nu = finite_convolution(&seq.factors, 3);
    let tr = Transform::empirical(&nu);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let t: f64 = rng.gen_range(-10.0..10.0);
        worst = worst.max((q_function(&lam, &tr, t).value - 1.0).abs());
    }
    let bz = bizero_check(&lam, &seq.factors, 3);
    let ok = worst < 1e-10 && bz.holds() && lam.len() == 8;
    report(5, "finite spectral pair", ok, start.elapsed(), Duration::from_secs(10), &format!("max |Q-1| {worst:e}, bi-zero {}", bz.holds()));
}

#[test]
fn criterion_6_rearrangement_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut ok = true;
    let mut with_ones = 0;
    for case in 0..20 {
        let mut s = random_params(&mut rng, 1, 3);
        if case % 2 == 0 {
            // Force some p_k = 1 among the first levels.
            let b: Vec<u64> = (1..=3).map(|k| s.b(k).max(2)).collect();
            let p = vec![1, rng.gen_range(1..3), 1];
            s = ParamSeq::new(b, s.b_period().to_vec(), p, s.p_period().to_vec()).unwrap();
        }
        if (1..=4).any(|k| s.p(k) == 1) {
            with_ones += 1;
        }
        for k in 2..=4 {
            let orig = finite_convolution(&original_factors(&s, k), k);
            let re = rearrange(&s, k);
            ok &= re.factors.iter().all(|f| f.digits.len() >= 2);
            ok &= finite_convolution(&re.factors, re.len()) == orig;
        }
    }
    ok &= with_ones >= 10;
    report(6, "rearrangement oracle", ok, start.elapsed(), Duration::from_secs(10), &format!("20 cases, {with_ones} with p_k = 1"));
}

#[test]
fn criterion_7_refinement_identity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut ok = true;
    for _ in 0..20 {
        let s = random_params(&mut rng, 1, 3);
        for depth in 1..=4 {
            ok &= refinement_check(&s, 1, depth).is_ok();
        }
    }
    report(7, "refinement identity", ok, start.elapsed(), Duration::from_secs(10), "20 cases, depths 1-4");
}

fn subsets(r: i64, size: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: i64, r: i64, size: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for x in start..r {
            cur.push(x);
            rec(x + 1, r, size, cur, out);
            cur.pop();
        }
    }
    rec(0, r, size, &mut cur, &mut out);
    out
}

#[test]
fn criterion_8_hadamard_suite() {
    use rayon::prelude::*;
    let start = Instant::now();
    let ints = |v: &[i64]| DigitSet::from_integers(v.iter().copied()).unwrap();
    let mut checked = 0usize;
    let mut disagreements = 0usize;
    let mut found: Vec<HadamardTriple> = Vec::new();
    for r in 2..=12i64 {
        for size in 2..=4usize.min(r as usize) {
            let sets: Vec<Vec<i64>> = subsets(r, size);
            let results: Vec<(usize, usize, Vec<HadamardTriple>)> = sets
                .par_iter()
                .map(|b| {
                    let bs = ints(b);
                    let mut dis = 0;
                    let mut hs = Vec::new();
                    for l in &sets {
                        let t = HadamardTriple::new(r, bs.clone(), ints(l)).unwrap();
                        let exact = t.is_hadamard();
                        if exact != (t.unitarity_defect() < 1e-10) {
                            dis += 1;
                        }
                        if exact && hs.len() < 2 {
                            hs.push(t);
                        }
                    }
                    (sets.len(), dis, hs)
                })
                .collect();
            for (n, d, hs) in results {
                checked += n;
                disagreements += d;
                found.extend(hs);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut compositions = 0;
    let mut compose_ok = true;
    for _ in 0..300 {
        let n = rng.gen_range(2..=3);
        let ts: Vec<HadamardTriple> = (0..n).map(|_| found[rng.gen_range(0..found.len())].clone()).collect();
        match compose_triples(&ts) {
            Ok(c) => compose_ok &= c.is_hadamard(),
            Err(_) => compose_ok = false,
        }
        compositions += 1;
    }
    let ok = disagreements == 0 && compose_ok;
    report(
        8,
        "hadamard suite",
        ok,
        start.elapsed(),
        Duration::from_secs(60),
        &format!("{checked} triples, {disagreements} disagreements, {compositions} compositions"),
    );
}

#[test]
fn criterion_9_decomposition_round_trip() {
    let start = Instant::now();
    let cases = [
        ParamSeq::constant(8, 2).unwrap(),
        ParamSeq::constant(12, 2).unwrap(),
        ParamSeq::new(vec![12, 12], vec![8], vec![3, 2], vec![1]).unwrap(),
        ParamSeq::new(vec![16], vec![8, 12], vec![4], vec![2, 3]).unwrap(),
    ];
    let mut ok = true;
    let mut runs = 0;
    for s in &cases {
        let lam = build_spectrum(s, 3).unwrap();
        let seq = rearranged_prefix(s, 3);
        let d1 = seq.factors[0].step.clone();
        let gamma1 = seq.factors[0].digits.len() as u64;
        let tail = omega_factors(&seq, 1, 2);
        let dm = u64::try_from(default_modulus(s)).unwrap();
        for c in [gamma1, 2 * gamma1, dm] {
            let q = c / gamma1;
            for j0 in 0..gamma1 {
                let choices: Vec<u64> = (0..q).map(|i| (j0 + i) % gamma1).collect();
                let d = decompose_spectrum(&lam, &d1, gamma1, c, &choices).unwrap();
                let want: Vec<Rational> = lam.realized().iter().map(|x| x / &d1).collect();
                ok &= d.reassemble() == want;
                // Children n/c + Λ_n are pairwise disjoint.
                let mut seen = BTreeSet::new();
                for (n, child) in d.children() {
                    for z in child.realized() {
                        ok &= seen.insert(Rational::new(n, c) + z.clone());
                    }
                }
                ok &= seen.len() == lam.len();
                let gamma = d.gamma.expect("class of 0 or j0/γ1 is inhabited");
                ok &= bizero_check(&gamma, &tail, 2).holds();
                runs += 1;
            }
        }
    }
    report(9, "decomposition round-trip", ok, start.elapsed(), Duration::from_secs(10), &format!("{runs} decompositions"));
}
