//! Acceptance suite: one line per criterion, failing if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::lv;
use reflexive_ma::duality::DualPair;
use reflexive_ma::fixtures;
use reflexive_ma::io::{parse_vertex_file, run_classification, RunConfig};
use reflexive_ma::lattice::{frac, Rat, RationalVector};
use reflexive_ma::screen::{classify, ClassifyOptions, Relation, StructuralVerdict};
use reflexive_ma::singular::{
    chart_labels, connectivity, pushforward_residual, smst_projection_convexity_test, CellLabel,
    DiscretePotential, HypothesisPolicy,
};
use reflexive_ma::transport::{
    discretize_canonical, stability_certificate, CertificateVerdict, PivotRule,
};
use reflexive_ma::volume::Side;

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

use Outcome::{Fail, Pass, Skip};

fn pair(id: &str) -> DualPair {
    fixtures::by_id(id).unwrap().pair().unwrap()
}

fn within(limit: Duration, start: Instant, detail: String) -> Outcome {
    let t = start.elapsed();
    if t <= limit {
        Pass(format!("{detail} in {:.2?}", t))
    } else {
        Fail(format!(
            "{detail}, but took {:.2?} (limit {:.0?})",
            t, limit
        ))
    }
}

fn expect(ok: bool, detail: String) -> Outcome {
    if ok {
        Pass(detail)
    } else {
        Fail(detail)
    }
}

fn points(vs: &[RationalVector]) -> BTreeSet<RationalVector> {
    vs.iter().cloned().collect()
}

fn heights_example() -> Outcome {
    let start = Instant::now();
    let p = pair("p2-heights");
    let r = classify(&p, &ClassifyOptions::default()).unwrap();
    let want: Vec<RationalVector> = [[1, 5], [1, 1], [0, -1], [-1, 0], [-1, 4]]
        .iter()
        .map(|v| RationalVector::from_i64(v))
        .collect();
    if points(&p.dual.vertices) != points(&want) {
        return Fail(format!("dual vertices {:?}", p.dual.vertices));
    }
    let w = r
        .worst_violation()
        .map(|w| w.ratio_string())
        .unwrap_or_default();
    if r.verdict != StructuralVerdict::Unstable || w != "4/11 vs 1/3" {
        return Fail(format!("verdict {:?}, witness {w}", r.verdict));
    }
    within(Duration::from_secs(1), start, format!("unstable, {w}"))
}

fn violation(id: &str, lhs: Rat, rhs: Rat) -> Outcome {
    let r = classify(&pair(id), &ClassifyOptions::default()).unwrap();
    let found = r
        .witnesses
        .iter()
        .any(|w| w.relation == Relation::Greater && w.lhs == lhs && w.rhs == rhs);
    expect(
        found && r.verdict == StructuralVerdict::Unstable,
        format!("{id}: {}", r.summary),
    )
}

fn id2_equality() -> Outcome {
    let r = classify(&pair("id-2"), &ClassifyOptions::default()).unwrap();
    let eq = r
        .witnesses
        .iter()
        .find(|w| w.relation == Relation::Equal && w.raw_string() == "36/72 = 3/6");
    expect(
        eq.is_some()
            && r.verdict == StructuralVerdict::StrictlySemistable
            && r.li_admissible == Some(true),
        format!(
            "{}; equality {}",
            r.summary,
            eq.map(|w| w.raw_string())
                .unwrap_or_else(|| "missing".into())
        ),
    )
}

fn polygons() -> Outcome {
    let start = Instant::now();
    let inputs = fixtures::reflexive_polygons()
        .iter()
        .map(reflexive_ma::io::PolytopeInput::from_fixture)
        .collect();
    let report = run_classification(&RunConfig::default(), inputs).unwrap();
    let a = &report.aggregates;
    let got = (
        a.total,
        a.strictly_semistable,
        a.unstable,
        a.li_admissible,
        a.sss_and_li,
    );
    if got != (16, 5, 2, 7, 3) {
        return Fail(format!("aggregates {got:?}"));
    }
    within(Duration::from_secs(5), start, format!("aggregates {got:?}"))
}

fn database() -> Outcome {
    let Ok(path) = std::env::var("REFLEXIVE_MA_DB3") else {
        return Skip(
            "REFLEXIVE_MA_DB3 is not set; the 4319-polytope database is not bundled".into(),
        );
    };
    let inputs = match parse_vertex_file(std::path::Path::new(&path)) {
        Ok(i) => i,
        Err(e) => return Fail(format!("{path}: {e}")),
    };
    let config = RunConfig {
        dim: Some(3),
        ..RunConfig::default()
    };
    let report = run_classification(&config, inputs).unwrap();
    let a = &report.aggregates;
    let got = (
        a.total,
        a.strictly_semistable,
        a.unstable,
        a.li_admissible,
        a.sss_and_li,
    );
    expect(
        got == (4319, 461, 1542, 238, 145),
        format!("aggregates {got:?}"),
    )
}

fn certificates() -> Outcome {
    let p2 = pair("p2");
    for level in 0..=2 {
        let c = stability_certificate(&discretize_canonical(&p2, level).unwrap(), PivotRule::Bland)
            .unwrap();
        if c.verdict != CertificateVerdict::Stable || c.gap != Some(Rat::from_integer(0.into())) {
            return Fail(format!("p2 at L={level}: {:?}, gap {:?}", c.verdict, c.gap));
        }
    }
    let h = pair("p2-heights");
    let tau = h.dual.facet_of(&lv(&[-1, 0])).unwrap();
    let c = stability_certificate(&discretize_canonical(&h, 1).unwrap(), PivotRule::Bland).unwrap();
    let w = match (&c.verdict, &c.witness) {
        (CertificateVerdict::InfeasibleRestricted, Some(w)) => w,
        _ => return Fail(format!("heights: {:?}", c.verdict)),
    };
    expect(
        w.side == Side::B && w.facets == vec![tau],
        format!(
            "p2 stable at L=0..2; heights infeasible, facet mass {} > reachable {}",
            w.mass, w.reachable
        ),
    )
}

fn properties() -> Outcome {
    let mut pairs = 0;
    let mut solves = 0;
    for f in fixtures::all() {
        let p = f.pair().unwrap();
        let checks = common::check_involution(&p)
            .and_then(|_| common::check_primitive_normals(&p))
            .and_then(|_| common::check_normalization(&p))
            .and_then(|_| common::check_compatibility_all(&p).map(|n| pairs += n))
            .and_then(|_| common::check_solves(&p, 0).map(|n| solves += n))
            .and_then(|_| common::check_solves(&p, 1).map(|n| solves += n))
            .and_then(|_| {
                if p.dim() <= 2 {
                    common::check_gauge(&p, 1, 2, &frac(7, 3))
                } else {
                    Ok(())
                }
            });
        if let Err(e) = checks {
            return Fail(format!("{}: {e}", f.id));
        }
    }
    Pass(format!(
        "{} fixtures, {pairs} chart pairs, {solves} optimal solves",
        fixtures::all().len()
    ))
}

fn singular_sets() -> Outcome {
    let start = Instant::now();
    let s3 = pair("simplex-3");
    let pot = DiscretePotential::for_pair(&s3, 1, 3).unwrap();
    let sm = chart_labels(&s3, &pot).unwrap();
    let dv = &s3.dual.vertices;
    let mut midpoints = BTreeSet::new();
    for i in 0..dv.len() {
        for j in i + 1..dv.len() {
            midpoints.insert(dv[i].add(&dv[j]).scale(&frac(1, 2)));
        }
    }
    let singular = sm.singular_cells();
    let all_touch = singular.iter().all(|&c| {
        sm.mesh.cells[c]
            .vertices
            .iter()
            .any(|&v| midpoints.contains(&sm.mesh.vertices[v]))
    });
    let s3_components = connectivity(&sm).count;
    if singular.is_empty() || !all_touch || s3_components != 1 {
        return Fail(format!(
            "simplex-3: {} singular cells, all at edge midpoints {all_touch}, {s3_components} components",
            singular.len()
        ));
    }

    let id2 = pair("id-2");
    let tau = id2.dual.facet_of(&lv(&[1, 0, 0])).unwrap();
    let pot = DiscretePotential::for_pair(&id2, 1, 3).unwrap();
    let sm = chart_labels(&id2, &pot).unwrap();
    let boundary: Vec<usize> = (0..sm.mesh.cells.len())
        .filter(|&c| sm.mesh.cells[c].facet == tau && sm.mesh.cells[c].touches_boundary)
        .collect();
    let all_singular = boundary
        .iter()
        .all(|&c| sm.labels[c] == CellLabel::Singular);
    let components = connectivity(&sm).count;
    if boundary.is_empty() || !all_singular || components < 2 {
        return Fail(format!(
            "id-2: {} boundary cells of tau_(1,0,0), all singular {all_singular}, {components} components",
            boundary.len()
        ));
    }
    within(
        Duration::from_secs(60),
        start,
        format!(
            "simplex-3: {} singular cells at edge midpoints, 1 component; id-2: {} boundary cells of tau_(1,0,0) singular, {components} components",
            singular.len(),
            boundary.len()
        ),
    )
}

fn smst() -> Outcome {
    let start = Instant::now();
    let cases = [
        ("p2", HypothesisPolicy::Require),
        ("simplex-3", HypothesisPolicy::Require),
        ("cube-2", HypothesisPolicy::Skip),
        ("cube-3", HypothesisPolicy::Skip),
    ];
    let mut notes = Vec::new();
    for (id, policy) in cases {
        let p = pair(id);
        let mut holds = true;
        for (k, v) in p.primal.vertices.iter().enumerate() {
            let t = match smst_projection_convexity_test(&p, v, 1000, 11 + k as u64, policy) {
                Ok(t) => t,
                Err(e) => return Fail(format!("{id} at {v}: {e}")),
            };
            if t.failures != 0 {
                return Fail(format!(
                    "{id} at {v}: {} of {} trials failed",
                    t.failures, t.trials
                ));
            }
            holds &= t.hypothesis_holds;
        }
        let n = p.primal.vertices.len();
        notes.push(if holds {
            format!("{id} 0/1000 at each of {n} vertices")
        } else {
            format!("{id} 0/1000 at each of {n} vertices (hypothesis fails, run anyway)")
        });
    }
    within(Duration::from_secs(30), start, notes.join(", "))
}

fn residual_convergence() -> Outcome {
    let p = pair("p2");
    let mut tvs = Vec::new();
    for level in 1..=3 {
        let pot = DiscretePotential::for_pair(&p, level, 3).unwrap();
        tvs.push(pushforward_residual(&p, &pot, 16).unwrap().facet_tv);
    }
    let monotone = tvs.windows(2).all(|w| w[1] <= w[0]);
    let zero = tvs.iter().all(|t| *t == Rat::from_integer(0.into()));
    let shown: Vec<String> = tvs.iter().map(|t| t.to_string()).collect();
    expect(
        monotone && zero,
        format!("facet TV at L=1..3: {}", shown.join(", ")),
    )
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("heights example on P2", heights_example),
        ("unstable quadrilateral", || {
            violation("unstable-quad", frac(3, 7), frac(2, 5))
        }),
        ("threefold id 16", || {
            violation("id-16", frac(25, 58), frac(3, 8))
        }),
        ("threefold id 2 equality", id2_equality),
        ("reflexive polygon aggregates", polygons),
        ("reflexive 3-polytope database", database),
        ("discrete transport certificates", certificates),
        ("exact property suite", properties),
        ("singular sets", singular_sets),
        ("small star projection convexity", smst),
        ("pushforward residual", residual_convergence),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Fail(format!("panicked: {msg}"))
        });
        let (tag, detail) = match outcome {
            Pass(d) => ("PASS", d),
            Skip(d) => ("SKIP", d),
            Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2}: {tag} {name}: {detail}", k + 1);
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
