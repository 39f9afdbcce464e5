use std::path::PathBuf;
use std::time::Instant;

use nijenhuis_core::algebra::{
    check_dual_algebra, check_n_algebra, check_prelie, check_prelie2, dual_from_dgca, AlgebraStructure, DgcaStructure,
    OpKind, ViolationReport,
};
use nijenhuis_core::ce::{ce_bicomplex, operadic_homology};
use nijenhuis_core::freelie::{lie_basis, FreeLieContext, FreeLieElement};
use nijenhuis_core::geometry::{fn_square_vs_classical, nijenhuis_form};
use nijenhuis_core::infinity::{
    assemble, check_lift, check_maurer_cartan, linear_j_from_prelie, maurer_cartan_samples, prelie_from_linear_j, psi_lift,
    quadratic_relations_check, MuCollection,
};
use nijenhuis_core::operad::{d_squared_check, enumerate_corollas, smodule_dim, CobarVariant, DualVariant};
use nijenhuis_core::{samples, Scalar};

use crate::input::{load, Structure};
use crate::report::{Bounds, Check, RunReport};
use crate::CliError;

pub const SUITES: [&str; 12] = [
    "freelie-coefficients",
    "prelie2-axioms",
    "n-algebra-axioms",
    "dual-axioms",
    "ce-bicomplex",
    "operadic-homology",
    "cobar-d2",
    "smodule-dims",
    "nijenhuis-dictionary",
    "maurer-cartan",
    "theorem-521",
    "fn-constant",
];

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub suite: String,
    pub input: Option<PathBuf>,
    pub trunc_k: usize,
    pub weight: usize,
    pub arity: usize,
    pub variant: CobarVariant,
    pub seed: u64,
    /// Number of seeded samples for randomized suites.
    pub samples: usize,
    pub ceiling: u128,
}

impl SuiteConfig {
    pub fn new(suite: &str) -> Self {
        SuiteConfig {
            suite: suite.to_string(),
            input: None,
            trunc_k: 3,
            weight: 3,
            arity: 4,
            variant: CobarVariant::PInfinity,
            seed: 0,
            samples: 0,
            ceiling: 50_000_000,
        }
    }

    fn bounds(&self) -> Bounds {
        Bounds {
            trunc_k: self.trunc_k,
            weight: self.weight,
            arity: self.arity,
            variant: variant_name(self.variant).to_string(),
        }
    }

    fn samples_or(&self, default: usize) -> usize {
        if self.samples == 0 {
            default
        } else {
            self.samples
        }
    }

    fn guard(&self, estimate: u128) -> Result<(), CliError> {
        if estimate > self.ceiling {
            return Err(CliError::ResourceCeiling {
                estimate,
                ceiling: self.ceiling,
            });
        }
        Ok(())
    }

    fn positive(&self) -> Result<(), CliError> {
        if self.trunc_k == 0 || self.weight == 0 || self.arity == 0 {
            return Err(CliError::Validation("bounds must be positive".into()));
        }
        Ok(())
    }
}

pub fn variant_name(v: CobarVariant) -> &'static str {
    match v {
        CobarVariant::PInfinity => "pinf",
        CobarVariant::NInfinity => "ninf",
    }
}

struct Output {
    checks: Vec<Check>,
    truncated: Vec<String>,
}

impl Output {
    fn new() -> Self {
        Output {
            checks: Vec::new(),
            truncated: Vec::new(),
        }
    }

    fn push(&mut self, c: Check) {
        self.checks.push(c);
    }
}

pub fn run_suite(config: &SuiteConfig) -> Result<RunReport, CliError> {
    config.positive()?;
    let start = Instant::now();
    let input = config.input.as_deref().map(load).transpose()?;
    let out = match config.suite.as_str() {
        "freelie-coefficients" => freelie_coefficients(config)?,
        "prelie2-axioms" => axioms(config, input, Axioms::PreLie2)?,
        "n-algebra-axioms" => axioms(config, input, Axioms::NAlgebra)?,
        "dual-axioms" => dual_axioms(input)?,
        "ce-bicomplex" => bicomplex(config, input)?,
        "operadic-homology" => homology(config, input)?,
        "cobar-d2" => cobar_d2(config)?,
        "smodule-dims" => smodule_dims(config)?,
        "nijenhuis-dictionary" => dictionary(config)?,
        "maurer-cartan" => maurer_cartan(config, input, false)?,
        "theorem-521" => maurer_cartan(config, input, true)?,
        "fn-constant" => fn_constant(config)?,
        other => return Err(CliError::UnknownSuite(other.to_string())),
    };
    let mut report = RunReport::new(&config.suite, config.seed, config.bounds(), out.checks, out.truncated);
    report.elapsed = start.elapsed();
    Ok(report)
}

fn violations(name: &str, r: &ViolationReport) -> Check {
    let detail = format!("{} instances, {} violations", r.checked, r.violations.len());
    Check::new(name, r.is_empty(), detail).with_witness(r.violations.first().map(|v| v.to_string()))
}

fn algebra_input(input: Option<Structure>) -> Result<Option<AlgebraStructure>, CliError> {
    match input {
        None => Ok(None),
        Some(Structure::Algebra(s)) => Ok(Some(s)),
        Some(_) => Err(CliError::Validation("this suite expects an algebra (ops circ/bullet/star)".into())),
    }
}

fn freelie_coefficients(config: &SuiteConfig) -> Result<Output, CliError> {
    let mut out = Output::new();
    let half = Scalar::ratio(1, 2);
    let c = FreeLieContext::with_degrees(&[0, 0, 0], 3);
    let [w1, w2, w3] = [0, 1, 2].map(|i| FreeLieElement::generator(&c, i, false));
    let coefficient = |lhs: &FreeLieElement, rhs: &FreeLieElement| -> Option<Scalar> {
        let (word, c) = rhs.tensor().iter().next()?;
        let k = lhs.tensor().coefficient(word) / c.clone();
        (rhs.scale(&k) == *lhs).then_some(k)
    };
    let expected = [
        ("w1∘w2 = c[w1,w2]", w1.induced_circ(&w2)?, w1.bracket(&w2)?, half.clone()),
        (
            "w1∘(w2∘w3) = c[w1,[w2,w3]]",
            w1.induced_circ(&w2.induced_circ(&w3)?)?,
            w1.bracket(&w2.bracket(&w3)?)?,
            Scalar::ratio(1, 6),
        ),
        (
            "(w1∘w2)∘w3 = c[[w1,w2],w3]",
            w1.induced_circ(&w2)?.induced_circ(&w3)?,
            w1.bracket(&w2)?.bracket(&w3)?,
            Scalar::ratio(1, 3),
        ),
    ];
    for (name, lhs, rhs, want) in expected {
        let got = coefficient(&lhs, &rhs);
        let shown = got.as_ref().map_or("not proportional".to_string(), |c| format!("c = {c}"));
        out.push(Check::new(name, got.as_ref() == Some(&want), format!("{shown}, expected {want}")));
    }
    for deg in [0i64, 1, 2] {
        let c = FreeLieContext::with_degrees(&[deg, 0], 3);
        let g = |i, shifted| FreeLieElement::generator(&c, i, shifted);
        let lhs = g(0, false).induced_bullet(&g(1, false))?;
        let a = g(0, false).bracket(&g(1, true))?.scale(&half);
        let b = g(0, true).bracket(&g(1, false))?.scale(&(half.clone() * Scalar::sign(deg)));
        let ok = lhs == a.sub(&b)?;
        out.push(Check::new(
            format!("[w1•w2] = ½[w1,Πw2] − (−1)^|w1| ½[Πw1,w2], |w1| = {deg}"),
            ok,
            if ok { "exact" } else { "differs" },
        ));
    }
    config.guard(4u128.saturating_pow(config.weight as u32 + 2))?;
    let c = FreeLieContext::with_degrees(&[0, 1], config.weight);
    let mut words = 0;
    let mut bad = None;
    for weight in 1..=config.weight {
        for word in lie_basis(&c, weight)? {
            words += 1;
            let x = FreeLieElement::from_word(&c, &word);
            let back = x.apply_d().apply_big_q().add(&x.apply_big_q().apply_d())?;
            let ok = back == x && x.apply_d().apply_d().is_zero() && x.apply_big_q().apply_big_q().is_zero();
            if !ok && bad.is_none() {
                bad = Some(word.render(&c));
            }
        }
    }
    out.push(
        Check::new(
            "dQ + Qd = Id, d² = 0, Q² = 0",
            bad.is_none(),
            format!("{words} basis words of weight ≤ {} on 2 generator pairs", config.weight),
        )
        .with_witness(bad),
    );
    Ok(out)
}

enum Axioms {
    PreLie2,
    NAlgebra,
}

fn axioms(config: &SuiteConfig, input: Option<Structure>, which: Axioms) -> Result<Output, CliError> {
    let mut out = Output::new();
    let given = algebra_input(input)?;
    let s = match (given, &which) {
        (Some(s), _) => s,
        (None, Axioms::PreLie2) => {
            out.truncated.push(format!("Im Q truncated at weight {}", config.weight));
            samples::image_of_q(&[0, 1], config.weight)?
        }
        (None, Axioms::NAlgebra) => {
            out.truncated.push(format!("Im Q truncated at weight {}", config.weight));
            samples::susy_sample(&[0, 1], config.weight, config.seed)?
        }
    };
    let report = match which {
        Axioms::PreLie2 => check_prelie2(&s)?,
        Axioms::NAlgebra => check_n_algebra(&s)?,
    };
    let mut names: Vec<String> = match which {
        Axioms::PreLie2 => ["pre-Lie", "bullet-symmetry", "odd-Jacobi", "compatibility"].map(String::from).to_vec(),
        Axioms::NAlgebra => Vec::new(),
    };
    names.extend(report.violations.iter().map(|v| v.identity.clone()));
    names.sort();
    names.dedup();
    for name in names {
        let sub = ViolationReport {
            violations: report.violations.iter().filter(|v| v.identity == name).cloned().collect(),
            checked: report.checked,
        };
        out.push(violations(&name, &sub));
    }
    out.push(violations("all identities", &report));
    Ok(out)
}

fn dual_axioms(input: Option<Structure>) -> Result<Output, CliError> {
    let mut out = Output::new();
    let dgca: DgcaStructure = match input {
        None => samples::three_element_dgca(),
        Some(Structure::Dgca(a)) => a,
        Some(_) => return Err(CliError::Validation("dual-axioms expects a dgca (ops mul/d)".into())),
    };
    let s = dual_from_dgca(&dgca)?;
    out.push(violations("pre-Lie²^! relations", &check_dual_algebra(&s, DualVariant::PDual)?));
    out.push(violations("N^! relations", &check_dual_algebra(&s, DualVariant::NDual)?));
    Ok(out)
}

fn default_structure(config: &SuiteConfig, input: Option<Structure>, out: &mut Output) -> Result<AlgebraStructure, CliError> {
    match algebra_input(input)? {
        Some(s) => Ok(s),
        None => {
            out.truncated.push(format!("Im Q truncated at weight {}", config.weight));
            Ok(samples::image_of_q(&[0, 1], config.weight)?)
        }
    }
}

fn bicomplex(config: &SuiteConfig, input: Option<Structure>) -> Result<Output, CliError> {
    let mut out = Output::new();
    let s = default_structure(config, input, &mut out)?;
    let len = config.arity.clamp(2, 3);
    config.guard((2 * s.dim() as u128).saturating_pow(len as u32 + 1))?;
    let r = ce_bicomplex(&s, len)?;
    let dims = format!("{} words of length ≤ {len}", r.dimension);
    out.push(Check::new("d∘² = 0", r.circ_square_residue == 0, format!("{} residue entries, {dims}", r.circ_square_residue)));
    out.push(Check::new("d•² = 0", r.bullet_square_residue == 0, format!("{} residue entries", r.bullet_square_residue)));
    out.push(Check::new(
        "d∘d• + d•d∘ = 0",
        r.anticommutator_residue == 0,
        format!("{} residue entries", r.anticommutator_residue),
    ));
    Ok(out)
}

fn homology(config: &SuiteConfig, input: Option<Structure>) -> Result<Output, CliError> {
    let mut out = Output::new();
    let s = default_structure(config, input, &mut out)?;
    let m = config.arity.min(3);
    config.guard((2 * s.dim() as u128).saturating_pow(m as u32 + 2))?;
    let h = operadic_homology(&s, m)?;
    out.push(Check::new(
        "d² = 0 on ⊙(g[1])",
        h.full_d_squared_zero,
        format!("symmetric powers up to {m}"),
    ));
    out.push(Check::new(
        "⊙(V[1]) is a subcomplex",
        h.subcomplex_closed && h.sub_d_squared_zero,
        format!("closed under d: {}, d² = 0: {}", h.subcomplex_closed, h.sub_d_squared_zero),
    ));
    out.push(Check::new(
        "d² = 0 on the quotient",
        h.quotient_d_squared_zero,
        format!("dims {:?}, ranks {:?}, homology {:?}", &h.dims[1..], &h.ranks[1..], &h.homology[1..]),
    ));
    Ok(out)
}

fn cobar_d2(config: &SuiteConfig) -> Result<Output, CliError> {
    let mut out = Output::new();
    let n = config.arity;
    config.guard((1u128 << (2 * n)).saturating_mul((1..=n as u128).product()))?;
    for variant in [CobarVariant::PInfinity, CobarVariant::NInfinity] {
        for unary in [false, true] {
            let r = d_squared_check(n, variant, unary)?;
            let residue: usize = r.failures.iter().map(|f| f.residue.len()).sum();
            let name = format!("d² = 0, {}{}", variant_name(variant), if unary { ", unary" } else { "" });
            let witness = r.failures.first().map(|f| format!("generator {:?}: {} terms", f.generator, f.residue.len()));
            out.push(
                Check::new(name, r.passed(), format!("{} generators of arity ≤ {n}, {residue} residue terms", r.checked.len()))
                    .with_witness(witness),
            );
        }
    }
    Ok(out)
}

fn smodule_dims(config: &SuiteConfig) -> Result<Output, CliError> {
    let mut out = Output::new();
    let n_max = config.arity.max(8);
    config.guard((1..=n_max as u128).product::<u128>() * n_max as u128)?;
    for variant in [CobarVariant::PInfinity, CobarVariant::NInfinity] {
        let mut bad = None;
        for n in 1..=n_max {
            let formula = smodule_dim(n, variant);
            let closed = match variant {
                CobarVariant::PInfinity => (1u128 << n) - 1,
                CobarVariant::NInfinity => 1u128 << n,
            };
            let counted = enumerate_corollas(n, variant).len() as u128;
            if (formula != closed || formula != counted) && bad.is_none() {
                bad = Some(format!("n = {n}: formula {formula}, closed form {closed}, enumeration {counted}"));
            }
        }
        out.push(
            Check::new(
                format!("dimensions, {}", variant_name(variant)),
                bad.is_none(),
                format!("n ≤ {n_max}"),
            )
            .with_witness(bad),
        );
    }
    Ok(out)
}

/// Seeded dim-2 linear `J`: even samples are arbitrary, odd ones come from
/// pre-Lie products.
pub fn dictionary_samples(seed: u64, count: usize) -> Vec<AlgebraStructure> {
    (0..count)
        .map(|i| {
            let s = seed.wrapping_mul(7919).wrapping_add(i as u64);
            if i % 2 == 0 {
                samples::random_structure(s, &[0, 0], &[OpKind::Circ], 0.5)
            } else {
                samples::random_prelie(s, 2)
            }
        })
        .collect()
}

fn dictionary(config: &SuiteConfig) -> Result<Output, CliError> {
    let mut out = Output::new();
    let count = config.samples_or(100);
    let mut agree = 0;
    let mut positives = 0;
    let mut first_bad = None;
    for (i, s) in dictionary_samples(config.seed, count).into_iter().enumerate() {
        let j = linear_j_from_prelie(&s, 3)?;
        let n_zero = nijenhuis_form(&j)?.is_zero();
        let pre_lie = check_prelie(&s)?.is_empty();
        let back = prelie_from_linear_j(&j)? == s;
        positives += usize::from(pre_lie);
        if n_zero == pre_lie && back {
            agree += 1;
        } else if first_bad.is_none() {
            first_bad = Some(format!("sample {i}: N_J = 0 is {n_zero}, pre-Lie is {pre_lie}, round trip {back}"));
        }
    }
    out.push(
        Check::new(
            "N_J = 0 ⟺ pre-Lie, J = Σ c^γ_{αβ} t^α θ^β ∂_γ",
            agree == count,
            format!("{agree}/{count} agree ({positives} pre-Lie)"),
        )
        .with_witness(first_bad),
    );
    Ok(out)
}

fn maurer_cartan(config: &SuiteConfig, input: Option<Structure>, lift: bool) -> Result<Output, CliError> {
    let mut out = Output::new();
    let k = config.trunc_k;
    out.truncated.push(format!("equations hold modulo polynomial degree > {k}"));
    let collections: Vec<MuCollection> = match input {
        Some(Structure::Mu(mu)) => vec![mu],
        Some(Structure::Algebra(s)) => vec![MuCollection::from_binary(&s, config.variant)?],
        Some(Structure::Dgca(_)) => return Err(CliError::Validation("expected a mu collection or an algebra".into())),
        None => {
            config.guard(4u128.saturating_pow(k as u32 + 1) * config.samples_or(50) as u128 * 1000)?;
            maurer_cartan_samples(config.seed, config.samples_or(50), k)?
        }
    };
    let given = collections.len() == 1 && config.input.is_some();
    if given {
        config.guard((2 * collections[0].dim() as u128 + 1).saturating_pow(k as u32 + 2))?;
    }
    let mut agree = 0;
    let mut valid = 0;
    let mut first_bad = None;
    for (i, mu) in collections.iter().enumerate() {
        let pair = assemble(mu, k)?;
        let mc = check_maurer_cartan(&pair)?;
        let other = if lift {
            check_lift(&psi_lift(&pair)?)?.passed()
        } else {
            quadratic_relations_check(mu, k)?.passed()
        };
        valid += usize::from(mc.passed());
        if mc.passed() == other {
            agree += 1;
        } else if first_bad.is_none() {
            first_bad = Some(format!("sample {i}: Maurer-Cartan {}, other check {other}", mc.passed()));
        }
        if given {
            let name = if lift { "[ð̂, ð̂] = 0 and [d, ð̂] = 0" } else { "[ð,ð] = 0 and Lie_ð Γ + ½[Γ•Γ] = 0" };
            out.push(
                Check::new(name, mc.passed() && other, format!("failing arities {:?}", mc.failing_arities()))
                    .with_witness(mc.witness()),
            );
        }
    }
    let other = if lift { "lift check" } else { "quadratic relations" };
    out.push(
        Check::new(
            format!("Maurer-Cartan verdict = {other} verdict"),
            agree == collections.len(),
            format!("{agree}/{} agree, {valid} valid", collections.len()),
        )
        .with_witness(first_bad),
    );
    Ok(out)
}

fn fn_constant(config: &SuiteConfig) -> Result<Output, CliError> {
    let mut out = Output::new();
    let count = config.samples_or(50);
    let mut constants = Vec::new();
    let mut criterion = 0;
    let mut first_bad = None;
    for i in 0..count {
        let dim = 2 + i % 2;
        let s = config.seed.wrapping_mul(104_729).wrapping_add(i as u64);
        let ring = if i % 3 == 0 {
            samples::random_prelie(s, dim)
        } else {
            samples::random_structure(s, &vec![0; dim], &[OpKind::Circ], 0.5)
        };
        let j = linear_j_from_prelie(&ring, 3)?;
        let cmp = fn_square_vs_classical(&j)?;
        if let Some(c) = cmp.constant {
            constants.push(c);
        }
        let mu = MuCollection::from_binary(&ring, CobarVariant::PInfinity)?;
        let mc = check_maurer_cartan(&assemble(&mu, 3)?)?.passed();
        if mc == cmp.classical.is_zero() {
            criterion += 1;
        } else if first_bad.is_none() {
            first_bad = Some(format!("sample {i}: MC {mc}, N_J = 0 is {}", cmp.classical.is_zero()));
        }
    }
    constants.sort();
    constants.dedup();
    let shown: Vec<String> = constants.iter().map(|c| c.to_string()).collect();
    out.push(Check::new(
        "[J•J] = c·Ñ_J with one constant c",
        constants.len() == 1,
        format!("c ∈ {{{}}} over {count} samples in dims 2 and 3", shown.join(", ")),
    ));
    out.push(
        Check::new(
            "Γ₁ Maurer-Cartan ⟺ N_Γ₁ = 0",
            criterion == count,
            format!("{criterion}/{count} agree"),
        )
        .with_witness(first_bad),
    );
    out.truncated.push("J linear, coordinates truncated at polynomial degree 3".into());
    Ok(out)
}
