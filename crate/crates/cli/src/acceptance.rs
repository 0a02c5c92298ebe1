//! The acceptance suite. Criteria 1 to 10 run in-process; criterion 11
//! (determinism of `all-acceptance` itself) needs two runs of the binary and
//! lives in the integration test.

use std::time::Duration;

use hkrlab::circlehopf::{cartier_dual_check, exterior, ext_colimit_tower, ext_self, AugmentedAlgebra};
use hkrlab::complexes::GroupReport;
use hkrlab::exactalg::{int, BaseRing};
use hkrlab::fgl::{distributions, interpolation_fgl, intvalued_structure, DividedPowerAlgebra};
use hkrlab::hochschild::{
    comparison_map_check, connes_on_forms, filtered_hc_minus_dr_model, form_basis, hkr_map, FPGradedAlgebra,
};
use hkrlab::report::Check;
use hkrlab::witt::{build_witt_law, char_zero_fixed_points_check, enumerate_kernel, FiniteRing, KernelMap, Witt};
use hkrlab::Result;

pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    /// Stated wall-clock budget.
    pub budget: Duration,
    pub run: fn() -> Result<Vec<Check>>,
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

pub const CRITERIA: [Criterion; 10] = [
    Criterion {
        id: 1,
        title: "Witt integrality and ghost naturality",
        budget: secs(30),
        run: witt_integrality,
    },
    Criterion {
        id: 2,
        title: "Artin-Schreier-Witt kernel sizes",
        budget: secs(10),
        run: artin_schreier_witt,
    },
    Criterion {
        id: 3,
        title: "characteristic-zero fixed points",
        budget: secs(5),
        run: char_zero_fixed_points,
    },
    Criterion {
        id: 4,
        title: "HKR over every supported base",
        budget: secs(120),
        run: hkr_every_base,
    },
    Criterion {
        id: 5,
        title: "Connes operator is de Rham in characteristic 0",
        budget: secs(120),
        run: connes_is_de_rham,
    },
    Criterion {
        id: 6,
        title: "filtered HC- graded pieces",
        budget: secs(60),
        run: filtered_graded_pieces,
    },
    Criterion {
        id: 7,
        title: "bar and de Rham HC- agree",
        budget: secs(180),
        run: two_models,
    },
    Criterion {
        id: 8,
        title: "circle cohomology and Ext towers",
        budget: secs(60),
        run: circle_cohomology,
    },
    Criterion {
        id: 9,
        title: "Cartier duality",
        budget: secs(60),
        run: cartier,
    },
    Criterion {
        id: 10,
        title: "formal group side",
        budget: secs(60),
        run: formal_group_side,
    },
];

fn alg(s: &str) -> Result<FPGradedAlgebra> {
    FPGradedAlgebra::parse(s)
}

fn witt_integrality() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for p in [2, 3, 5] {
        for m in 1..=4 {
            // construction fails on any non-integral coefficient
            let law = build_witt_law(p, m)?;
            out.push(Check::pass(format!("W_{m} at p={p} has integer coefficients")));
            let failures = law.naturality().failures;
            out.push(Check::from_bool(format!("W_{m} at p={p} ghost naturality"), failures.is_empty(), || {
                failures.join("; ")
            }));
        }
    }
    Ok(out)
}

fn artin_schreier_witt() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for p in [2u64, 3] {
        let fp = FiniteRing::field(p, 1)?;
        for m in 1..=3 {
            let w = Witt::new(&fp, p, m)?;
            let k = enumerate_kernel(&w, &KernelMap::FrobeniusMinusId)?;
            let expect = p.pow(m as u32) as usize;
            out.push(Check::from_bool(
                format!("|ker(F - id)| on W_{m}(F_{p}) = {expect}"),
                k.size == expect && k.is_subgroup,
                || format!("size {} (subgroup: {})", k.size, k.is_subgroup),
            ));
        }
    }
    Ok(out)
}

fn char_zero_fixed_points() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for p in [2, 3] {
        for m in 1..=3 {
            let r = char_zero_fixed_points_check(p, m)?;
            out.extend(r.checks.into_iter().map(|c| Check {
                name: format!("p={p} m={m}: {}", c.name),
                ..c
            }));
        }
    }
    Ok(out)
}

fn hkr_every_base() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for base in ["Q", "F_2", "F_3", "Z"] {
        for gens in ["[x]", "[x,y]"] {
            let a = alg(&format!("{base}{gens}"))?;
            let mut bad = Vec::new();
            for d in 0..=4 {
                for q in 0..=3 {
                    let (_, rep) = hkr_map(&a, q, d)?;
                    let forms = form_basis(&a, q, d).len();
                    if rep.hh != GroupReport::free(forms) || !rep.isomorphism {
                        bad.push(format!("q={q} d={d}: HH {} vs {forms} forms, iso {}", rep.hh, rep.isomorphism));
                    }
                }
            }
            out.push(Check::from_bool(format!("{a}: HH_q = Omega^q for q <= 3, d <= 4"), bad.is_empty(), || bad.join("; ")));
        }
    }
    Ok(out)
}

fn connes_is_de_rham() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for spec in ["Q[x]", "Q[x,y]"] {
        let a = alg(spec)?;
        let mut bad = Vec::new();
        for d in 0..=4 {
            for q in 0..=3 {
                let (induced, expected) = connes_on_forms(&a, q, d)?;
                if induced != expected {
                    bad.push(format!("q={q} d={d}"));
                }
            }
        }
        out.push(Check::from_bool(format!("{spec}: hkr^-1 B hkr = d_dR"), bad.is_empty(), || bad.join("; ")));
    }
    Ok(out)
}

fn filtered_graded_pieces() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for spec in ["Q[x]", "F_3[x]"] {
        let a = alg(spec)?;
        for d in 0..=4 {
            let m = filtered_hc_minus_dr_model(&a, 3, d, 0..=2)?;
            out.extend(m.checks.into_iter().map(|c| Check {
                name: format!("{spec} d={d}: {}", c.name),
                ..c
            }));
        }
    }
    Ok(out)
}

fn two_models() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for spec in ["Q[x]", "Q[x,y]"] {
        let r = comparison_map_check(&alg(spec)?, 4, 4)?;
        out.extend(r.checks.into_iter().map(|c| Check {
            name: format!("{spec}: {}", c.name),
            ..c
        }));
    }
    Ok(out)
}

fn circle_cohomology() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for ring in [BaseRing::Rationals, BaseRing::prime_field(2)?, BaseRing::prime_field(3)?] {
        let lam = AugmentedAlgebra::from_hopf(&exterior(ring, 1, 1)?)?;
        let t = ext_self(&lam, 4)?;
        let polynomial = t.rows.len() == 5
            && t.rows.iter().enumerate().all(|(s, r)| {
                let s = s as i64;
                r.s as i64 == s && r.dim == 1 && r.cohomological_degree == 2 * s && r.weight == -s
            });
        out.push(Check::from_bool(format!("Ext over {ring} is k[u], |u| = (2, -1)"), polynomial, || {
            format!("{:?}", t.rows)
        }));
    }
    for p in [2, 3] {
        let r = ext_colimit_tower(p, 3)?;
        out.extend(r.checks.into_iter().map(|c| Check {
            name: format!("tower p={p}: {}", c.name),
            ..c
        }));
    }
    Ok(out)
}

fn cartier() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for p in [2, 3] {
        for m in 1..=2 {
            let r = cartier_dual_check(p, m)?;
            out.extend(r.checks.into_iter().map(|c| Check {
                name: format!("p={p} m={m}: {}", c.name),
                ..c
            }));
        }
    }
    Ok(out)
}

fn formal_group_side() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for lambda in [0i64, 1, 2, -1] {
        for ring in [BaseRing::Integers, BaseRing::prime_field(2)?, BaseRing::prime_field(3)?, BaseRing::prime_field(5)?] {
            let f = interpolation_fgl(ring, &int(lambda), 8)?;
            let bad: Vec<String> = f.axiom_checks().into_iter().filter(|c| !c.passed()).map(|c| c.name).collect();
            out.push(Check::from_bool(format!("X + Y + {lambda}XY over {ring} is a formal group law"), bad.is_empty(), || {
                bad.join("; ")
            }));
        }
    }
    for n in 1..=8u32 {
        let law = interpolation_fgl(BaseRing::Integers, &int(1), n.max(2))?;
        let d = distributions(&law, n)?;
        let r = intvalued_structure(n)?;
        let mut bad = Vec::new();
        for i in 0..=n as usize {
            for j in 0..=n as usize {
                if d.product(i, j) != Some(r.product(i, j)) {
                    bad.push(format!("product ({i}, {j})"));
                }
            }
            if d.coproduct(i) != r.coproduct(i) {
                bad.push(format!("coproduct {i}"));
            }
            if d.antipode(i) != r.antipode(i) {
                bad.push(format!("antipode {i}"));
            }
        }
        out.push(Check::from_bool(format!("N={n}: Dist(multiplicative) = integer-valued polynomials"), bad.is_empty(), || {
            bad.join("; ")
        }));
    }
    let add = distributions(&interpolation_fgl(BaseRing::Integers, &int(0), 8)?, 8)?;
    let g = DividedPowerAlgebra::new(8);
    let same = (0..=8).all(|i| (0..=8).all(|j| add.product(i, j) == Some(&g.product(i, j)[..])));
    out.push(Check::from_bool("N=8: Dist(additive) = divided powers", same, || "products differ".into()));
    for n in 0..=12 {
        let r = intvalued_structure(n)?;
        out.extend(r.graded().checks.iter().cloned().map(|c| Check {
            name: format!("N={n}: {}", c.name),
            ..c
        }));
    }
    Ok(out)
}

/// Runs one criterion; an error becomes a failing check.
pub fn run(c: &Criterion) -> Vec<Check> {
    match (c.run)() {
        Ok(checks) if checks.is_empty() => vec![Check::fail(c.title, "no checks were produced")],
        Ok(checks) => checks,
        Err(e) => vec![Check::fail(c.title, e.to_string())],
    }
}
