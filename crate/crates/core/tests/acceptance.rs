//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line
//! to stderr (bypassing test capture) and the test fails if any criterion does.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use welded::gauss::moves::enumerate_moves;
use welded::pd::{apply_pd_move, find_sites, inverse_move, pd_to_gauss, trefoil, MoveDirection, PdMove, PdMoveKind};
use welded::search::{enumerate_gauss, find_single_move_trivial_pair, is_trivial_with_moves};
use welded::unknotting::{prop24_bound, prop24_certificates, unknot_descending, unknotting_upper};
use welded::{
    apply_gauss_move, canonical_code, parse_gauss_code, GaussDiagram, GaussMoveKind, PlanarDiagram, ReductionTrace,
    SearchLimits, SearchVerdict, Sign,
};

const TREFOIL: &str = "O1+ U2+ O3+ U1+ O2+ U3+";

struct Report {
    failures: Vec<String>,
    traces: Vec<ReductionTrace>,
    pd_steps: Vec<(PlanarDiagram, PdMove, PlanarDiagram)>,
}

impl Report {
    fn line(&mut self, n: usize, ok: bool, detail: String, elapsed: Duration, budget: Duration) {
        let ok = ok && elapsed <= budget;
        let status = if ok { "PASS" } else { "FAIL" };
        let text = format!("criterion {n}: {status} {detail} ({:.2}s, budget {}s)", elapsed.as_secs_f64(), budget.as_secs());
        writeln!(std::io::stderr(), "{text}").unwrap();
        if !ok {
            self.failures.push(text);
        }
    }
}

fn random_gauss(rng: &mut ChaCha8Rng, n: usize) -> GaussDiagram {
    let mut slots: Vec<usize> = (0..2 * n).collect();
    slots.shuffle(rng);
    let chords: Vec<_> = (0..n)
        .map(|i| {
            let sign = if rng.gen() { Sign::Pos } else { Sign::Neg };
            (i as u32 + 1, slots[2 * i], slots[2 * i + 1], sign)
        })
        .collect();
    GaussDiagram::from_chords(&chords).unwrap()
}

fn sample_diagrams() -> Vec<GaussDiagram> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    (0..1000).map(|_| {
        let n = rng.gen_range(1..=8);
        random_gauss(&mut rng, n)
    }).collect()
}

/// Random walk of forward and backward planar moves from the circle or the trefoil.
fn random_pds(rng: &mut ChaCha8Rng, count: usize) -> Vec<PlanarDiagram> {
    let growth = [PdMoveKind::C1, PdMoveKind::C2, PdMoveKind::V1, PdMoveKind::V2, PdMoveKind::W, PdMoveKind::C3];
    let mut out = Vec::new();
    while out.len() < count {
        let mut pd = if rng.gen() { PlanarDiagram::circle() } else { trefoil() };
        for _ in 0..rng.gen_range(1..=6) {
            let kind = *growth.choose(rng).unwrap();
            let dir = if pd.len() >= 7 || rng.gen_bool(0.3) { MoveDirection::Backward } else { MoveDirection::Forward };
            let sites = find_sites(&pd, kind, dir);
            if let Some(mv) = sites.choose(rng) {
                pd = apply_pd_move(&pd, mv).unwrap();
            }
        }
        out.push(pd);
    }
    out
}

fn any_site(pd: &PlanarDiagram, kinds: &[PdMoveKind]) -> Vec<PdMove> {
    kinds
        .iter()
        .flat_map(|&k| find_sites(pd, k, MoveDirection::Forward).into_iter().chain(find_sites(pd, k, MoveDirection::Backward)))
        .collect()
}

fn criterion_1(r: &mut Report) {
    let t = Instant::now();
    let mut certified = 0;
    let mut total = 0;
    for n in 1..=2 {
        for g in enumerate_gauss(n, false) {
            total += 1;
            let lim = SearchLimits { max_chords: Some(n), ..SearchLimits::default() };
            if let SearchVerdict::Certified(tr) = is_trivial_with_moves(&g, &lim, &[GaussMoveKind::W, GaussMoveKind::C1Remove]) {
                certified += 1;
                r.traces.push(tr);
            }
        }
    }
    r.line(1, certified == 52 && total == 52, format!("{certified}/{total} certified by W and C1 removal"), t.elapsed(), Duration::from_secs(1));
}

fn criterion_2(r: &mut Report, sample: &[GaussDiagram]) {
    let t = Instant::now();
    let mut ok = 0;
    for g in sample {
        let u = unknot_descending(g);
        let flipped = g.crossing_changes(u.change_set.iter()).unwrap();
        if flipped == u.descending && u.trace.start() == &u.descending && u.trace.replay().is_ok_and(|e| e.is_empty()) {
            ok += 1;
        }
        r.traces.push(u.trace);
    }
    r.line(2, ok == sample.len(), format!("{ok}/{} unknotted to the empty diagram", sample.len()), t.elapsed(), Duration::from_secs(30));
}

fn criterion_3(r: &mut Report, sample: &[GaussDiagram]) {
    let t = Instant::now();
    let mut violations = 0;
    let mut checked = 0;
    for g in sample.iter().filter(|g| g.n() >= 1) {
        for c in prop24_certificates(g).unwrap() {
            checked += 1;
            if !c.s1.is_disjoint(&c.s2) || c.s1.len() + c.s2.len() != g.n() - 1 || c.verify(g).is_err() {
                violations += 1;
            }
        }
        if prop24_bound(g).unwrap().bound > (g.n() - 1) / 2 {
            violations += 1;
        }
    }
    r.line(3, violations == 0, format!("{violations} violations over {checked} certificates"), t.elapsed(), Duration::from_secs(30));
}

fn criterion_4(r: &mut Report) {
    let t = Instant::now();
    let lim = SearchLimits::default();
    let mut bad = 0;
    let mut total = 0;
    for n in 1..=3 {
        for g in enumerate_gauss(n, true) {
            total += 1;
            match unknotting_upper(&g, &lim) {
                Ok(b) if b.value <= prop24_bound(&g).unwrap().bound => r.traces.push(b.trace),
                _ => bad += 1,
            }
        }
    }
    let tre = unknotting_upper(&parse_gauss_code(TREFOIL).unwrap(), &lim).unwrap();
    let tre_ok = tre.value == 1 && tre.exhaustive_below;
    r.traces.push(tre.trace);
    r.line(
        4,
        bad == 0 && tre_ok,
        format!("{bad}/{total} above the per-chord bound; trefoil u<={} exhaustive_below={}", tre.value, tre.exhaustive_below),
        t.elapsed(),
        Duration::from_secs(120),
    );
}

fn criterion_5(r: &mut Report) {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let virtual_kinds = [PdMoveKind::V1, PdMoveKind::V2, PdMoveKind::V3, PdMoveKind::V4];
    let classical_kinds = [PdMoveKind::C1, PdMoveKind::C2, PdMoveKind::C3, PdMoveKind::W];
    let (mut v_pairs, mut c_pairs, mut mismatches) = (0, 0, 0);
    let mut v_kinds_seen = std::collections::BTreeSet::new();
    for pd in random_pds(&mut rng, 400) {
        let before = pd_to_gauss(&pd).unwrap();
        if let Some(mv) = any_site(&pd, &virtual_kinds).choose(&mut rng) {
            v_pairs += 1;
            v_kinds_seen.insert(mv.kind);
            let after = apply_pd_move(&pd, mv).unwrap();
            if canonical_code(&pd_to_gauss(&after).unwrap()) != canonical_code(&before) {
                mismatches += 1;
            }
        }
        if let Some(mv) = any_site(&pd, &classical_kinds).choose(&mut rng) {
            c_pairs += 1;
            let after = apply_pd_move(&pd, mv).unwrap();
            let target = canonical_code(&pd_to_gauss(&after).unwrap());
            let gauss_kinds: &[GaussMoveKind] = match mv.kind {
                PdMoveKind::C1 => &[GaussMoveKind::C1Add, GaussMoveKind::C1Remove],
                PdMoveKind::C2 => &[GaussMoveKind::C2Add, GaussMoveKind::C2Remove],
                PdMoveKind::C3 => &[GaussMoveKind::C3],
                _ => &[GaussMoveKind::W],
            };
            let hit = enumerate_moves(&before, gauss_kinds)
                .iter()
                .any(|gm| apply_gauss_move(&before, gm).is_ok_and(|g| canonical_code(&g) == target));
            if !hit {
                mismatches += 1;
            }
            r.pd_steps.push((pd.clone(), mv.clone(), after));
        }
    }
    let ok = mismatches == 0 && v_pairs >= 200 && c_pairs >= 200 && v_kinds_seen.len() == 4;
    r.line(
        5,
        ok,
        format!("{mismatches} mismatches over {v_pairs} virtual and {c_pairs} classical pairs ({} virtual kinds)", v_kinds_seen.len()),
        t.elapsed(),
        Duration::from_secs(60),
    );
}

fn criterion_6(r: &mut Report, sample: &[GaussDiagram]) {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut failures = 0;
    for g in sample {
        let ids: Vec<u32> = g.chord_ids().collect();
        let id = *ids.choose(&mut rng).unwrap();
        if g.crossing_change(id).and_then(|h| h.crossing_change(id)).as_ref() != Ok(g) {
            failures += 1;
        }
    }
    let small: Vec<&GaussDiagram> = sample.iter().filter(|g| g.n() <= 5).collect();
    let mut pairs = 0;
    while pairs < 1000 {
        let g = *small.choose(&mut rng).unwrap();
        let moves = enumerate_moves(g, &GaussMoveKind::ALL);
        let Some(mv) = moves.choose(&mut rng) else { continue };
        pairs += 1;
        let after = apply_gauss_move(g, mv).unwrap();
        let back = mv.inverse(g).and_then(|inv| apply_gauss_move(&after, &inv));
        if back.map(|b| canonical_code(&b)) != Ok(canonical_code(g)) {
            failures += 1;
        }
    }
    let mut pd_pairs = 0;
    for pd in random_pds(&mut rng, 300) {
        let moves = any_site(&pd, &PdMoveKind::ALL);
        let Some(mv) = moves.choose(&mut rng) else { continue };
        pd_pairs += 1;
        let after = apply_pd_move(&pd, mv).unwrap();
        let restored = inverse_move(&pd, mv, &after).and_then(|inv| apply_pd_move(&after, &inv).ok());
        if restored.map(|p| p.canonical_key()) != Some(pd.canonical_key()) {
            failures += 1;
        }
    }
    r.line(
        6,
        failures == 0,
        format!("{failures} failures over {} crossing changes, {pairs} Gauss moves, {pd_pairs} planar moves", sample.len()),
        t.elapsed(),
        Duration::from_secs(60),
    );
}

fn criterion_7(r: &mut Report) {
    let lim = SearchLimits { max_chords: Some(8), max_states: 1_000_000, ..SearchLimits::default() };
    for kind in [PdMoveKind::Delta, PdMoveKind::Sharp] {
        let t = Instant::now();
        let found = find_single_move_trivial_pair(kind, &lim);
        let detail = match &found {
            Some(p) => {
                let b = canonical_code(&pd_to_gauss(&p.before).unwrap());
                let a = canonical_code(&pd_to_gauss(&p.after).unwrap());
                let ok = a != b
                    && p.before.len() <= 8
                    && p.before_trace.replay().is_ok_and(|g| g.is_empty())
                    && p.after_trace.replay().is_ok_and(|g| g.is_empty());
                (ok, format!("{kind} pair with {} crossings: [{b}] -> [{a}]", p.before.len()))
            }
            None => (false, format!("no {kind} pair within limits")),
        };
        if let Some(p) = found {
            r.traces.push(p.before_trace);
            r.traces.push(p.after_trace);
            r.pd_steps.push((p.before, p.mv, p.after));
        }
        r.line(7, detail.0, detail.1, t.elapsed(), Duration::from_secs(300));
    }
}

fn criterion_8(r: &mut Report) {
    let t = Instant::now();
    let total = r.traces.len() + r.pd_steps.len();
    let mut bad = r.traces.iter().filter(|tr| tr.replay().is_err()).count();
    bad += r
        .pd_steps
        .iter()
        .filter(|(b, mv, a)| apply_pd_move(b, mv).map(|x| x.canonical_key()) != Ok(a.canonical_key()))
        .count();
    r.line(8, bad == 0 && total > 0, format!("{}/{total} certificates replayed", total - bad), t.elapsed(), Duration::from_secs(60));
}

#[test]
fn acceptance_criteria() {
    let mut r = Report { failures: Vec::new(), traces: Vec::new(), pd_steps: Vec::new() };
    let sample = sample_diagrams();
    criterion_1(&mut r);
    criterion_2(&mut r, &sample);
    criterion_3(&mut r, &sample);
    criterion_4(&mut r);
    criterion_5(&mut r);
    criterion_6(&mut r, &sample);
    criterion_7(&mut r);
    criterion_8(&mut r);
    assert!(r.failures.is_empty(), "failed:\n{}", r.failures.join("\n"));
}
