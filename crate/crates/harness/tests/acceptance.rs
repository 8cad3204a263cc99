//! One line per primary acceptance criterion. Exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use elhlab_core::framework::{concepts_by_size, dllite_axioms, Example, FragmentId, LearningFramework};
use elhlab_core::hardness::{
    build_family, candidate_cis, classify_ci, run_adversarial, Classification, MqLearner, Verdict,
};
use elhlab_core::reasoner::{canonical_check, default_fuel};
use elhlab_core::{entails, Axiom, Concept, ConceptName, Reasoner, RoleName, Signature, TBox};
use elhlab_harness::{run_experiment, EventBody, ExperimentConfig, GenSpec, TargetSource, Transcript};

struct Check {
    name: &'static str,
    limit: Duration,
    run: fn() -> Result<String, String>,
}

fn main() -> ExitCode {
    let checks = [
        Check { name: "reasoner cross-validation", limit: Duration::from_secs(60), run: reasoner_cross_validation },
        Check { name: "cyclic chain n <= 10", limit: Duration::from_secs(1), run: cyclic_chain },
        Check { name: "toy-mq worked example", limit: Duration::from_secs(1), run: toy_example },
        Check { name: "at-most-one lemma n = 2, 3", limit: Duration::from_secs(10), run: lemma },
        Check { name: "MQ lower bound n = 12", limit: Duration::from_secs(30), run: lower_bound },
        Check { name: "horn-mqeq on 100 targets", limit: Duration::from_secs(60), run: horn },
        Check { name: "dl-lite budgets", limit: Duration::from_secs(30), run: dllite },
        Check { name: "pac(dllite-eq) over 200 trials", limit: Duration::from_secs(120), run: pac },
        Check { name: "reproducibility", limit: Duration::from_secs(120), run: reproducibility },
    ];
    let mut failed = 0;
    for c in checks {
        let start = Instant::now();
        let result = (c.run)();
        let took = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if took <= c.limit => (true, d),
            Ok(d) => (false, format!("{d}; over the {:?} limit", c.limit)),
            Err(d) => (false, d),
        };
        failed += usize::from(!ok);
        println!("{} {}: {} [{:.2}s]", if ok { "PASS" } else { "FAIL" }, c.name, detail, took.as_secs_f64());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// All TBoxes of at most two axioms from a pool of small axioms, against
/// all CIs with sides of depth <= 2 and size <= 5, over two signatures of
/// three names.
fn reasoner_cross_validation() -> Result<String, String> {
    let sigs = [Signature::from_strs(&["A", "B"], &["r"]).unwrap(), Signature::from_strs(&["A"], &["r", "s"]).unwrap()];
    let mut pairs = 0usize;
    for sig in &sigs {
        let flat = |depth, size| -> Vec<Concept> { concepts_by_size(sig, depth, size).into_iter().flatten().collect() };
        let small = flat(1, 3);
        let mut pool: Vec<Axiom> = Vec::new();
        for l in &small {
            for r in &small {
                let a = Axiom::ci(l.clone(), r.clone());
                if l != r && !r.is_top() && !l.is_top() || (l.is_top() && !r.is_top()) {
                    pool.push(a);
                }
            }
        }
        for r in &sig.role_names {
            for s in &sig.role_names {
                if r != s {
                    pool.push(Axiom::ri(r.clone(), s.clone()));
                }
            }
        }
        let mut tboxes = vec![TBox::new()];
        for (i, a) in pool.iter().enumerate() {
            tboxes.push([a.clone()].into_iter().collect());
            for b in &pool[i + 1..] {
                tboxes.push([a.clone(), b.clone()].into_iter().collect());
            }
        }
        let queries = flat(2, 5);
        for t in &tboxes {
            let r = Reasoner::new(t);
            for l in &queries {
                for q in &queries {
                    let fast = r.subsumes(l, q);
                    let fuel = default_fuel(t, q) + l.depth();
                    let slow = canonical_check(t, l, q, fuel).map_err(|e| format!("{t}{l} <= {q}: {e}"))?;
                    ensure(fast == slow, || format!("disagree on {l} <= {q} under\n{t}reasoner says {fast}"))?;
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{pairs} (TBox, CI) pairs agree"))
}

fn cyclic_chain() -> Result<String, String> {
    let a = Concept::Name(ConceptName::new("A").unwrap());
    let r = RoleName::new("r").unwrap();
    let t: TBox = [Axiom::ci(a.clone(), Concept::exists(r.clone(), a.clone()))].into_iter().collect();
    let mut chain = a.clone();
    for n in 1..=10 {
        chain = Concept::exists(r.clone(), chain);
        ensure(entails(&t, &Axiom::ci(a.clone(), chain.clone())), || format!("n = {n} not entailed"))?;
    }
    Ok("entailed for n = 1..10".into())
}

fn toy_example() -> Result<String, String> {
    let cfg = ExperimentConfig::new(
        FragmentId::ToyAtomic,
        "toy-mq".parse().unwrap(),
        TargetSource::Inline("ci: A <= B\nci: B <= C".into()),
    );
    let out = run_experiment(&cfg).map_err(|e| e.to_string())?;
    let h = out.hypothesis.as_ref().map(TBox::to_string).unwrap_or_default();
    let mq = out.metrics().mq_count;
    ensure(h == "ci: A <= B\nci: A <= C\nci: B <= C\n", || format!("hypothesis {h:?}"))?;
    ensure(mq == 9, || format!("{mq} MQs"))?;
    Ok("{A <= B, A <= C, B <= C} with 9 MQs".into())
}

fn lemma() -> Result<String, String> {
    let mut counts = Vec::new();
    for n in [2, 3] {
        let fam = build_family(n).unwrap();
        let mut k = 0;
        for a in candidate_cis(&fam) {
            k += 1;
            if let Classification::Violation { members } = classify_ci(&fam, &a).map_err(|e| e.to_string())? {
                return Err(format!("n = {n}: {a} entailed by {members:?}"));
            }
        }
        counts.push(format!("n = {n}: {k} CIs"));
    }
    Ok(format!("no violations ({})", counts.join(", ")))
}

fn lower_bound() -> Result<String, String> {
    let n = 12;
    let threshold = (1usize << n) - 1;
    let mut parts = Vec::new();
    for l in MqLearner::ALL {
        let run = run_adversarial(n, l).map_err(|e| e.to_string())?;
        ensure(run.elimination_bound_held, || format!("{l}: elimination bound broken"))?;
        let failed = matches!(run.verdict, Verdict::Failed { .. });
        ensure(failed || run.queries > threshold, || format!("{l}: identified with {} MQs", run.queries))?;
        parts.push(format!(
            "{l} {} MQs {}",
            run.queries,
            if failed { format!("FAILED, {} remain", run.remaining) } else { "identified".into() }
        ));
    }
    Ok(parts.join("; "))
}

fn counterexamples_positive(t: &Transcript, target: &TBox) -> Result<(), String> {
    let mut h = TBox::new();
    for e in &t.events {
        match &e.body {
            EventBody::HypothesisSnapshot { tbox } => h = elhlab_core::parse_tbox(tbox).unwrap(),
            EventBody::AnswerGiven { answer, example: Some(x), .. } if answer == "counterexample" => {
                let a = Example::parse(x).unwrap();
                let a = a.as_axiom().unwrap();
                ensure(entails(target, a) && !entails(&h, a), || format!("counterexample {a} is not positive"))?;
            }
            _ => {}
        }
    }
    Ok(())
}

fn horn() -> Result<String, String> {
    let mut worst = 0.0f64;
    let mut total_mq = 0;
    for seed in 0..100u64 {
        let sig = 4 + (seed % 9) as usize;
        let axioms = 1 + (seed / 9 % 8) as usize;
        let g: GenSpec = format!("fragment=toy-conj,sig={sig},axioms={axioms},seed={seed}").parse().unwrap();
        let cfg = ExperimentConfig::new(FragmentId::ToyConj, "horn-mqeq".parse().unwrap(), TargetSource::Gen(g));
        let out = run_experiment(&cfg).map_err(|e| e.to_string())?;
        ensure(out.success(), || format!("seed {seed}: not identified"))?;
        counterexamples_positive(&out.transcript, &out.target).map_err(|e| format!("seed {seed}: {e}"))?;
        let mq = out.metrics().mq_count;
        let bound = 4 * axioms * axioms * sig;
        ensure(mq <= bound, || format!("seed {seed}: {mq} MQs > {bound}"))?;
        worst = worst.max(mq as f64 / bound as f64);
        total_mq += mq;
    }
    Ok(format!("100/100 identified, {total_mq} MQs in total, worst MQ/bound ratio {worst:.2}"))
}

fn dllite() -> Result<String, String> {
    let (nc, nr) = (3usize, 2usize);
    let space = (nc + nr).pow(2) + nr * nr;
    let names: Vec<ConceptName> = ["A", "B", "C"].iter().map(|n| ConceptName::new(n).unwrap()).collect();
    let roles: Vec<RoleName> = ["r", "s"].iter().map(|n| RoleName::new(n).unwrap()).collect();
    ensure(dllite_axioms(&names, &roles).len() == space, || "axiom space size".into())?;
    let mut max_eq = 0;
    for seed in 0..100u64 {
        let axioms = 1 + (seed % 6) as usize;
        let g: GenSpec = format!("fragment=dllite,sig={nc},roles={nr},axioms={axioms},seed={seed}").parse().unwrap();
        for learner in ["dllite-mq", "dllite-eq"] {
            let cfg = ExperimentConfig::new(FragmentId::DlLite, learner.parse().unwrap(), TargetSource::Gen(g.clone()));
            let out = run_experiment(&cfg).map_err(|e| e.to_string())?;
            ensure(out.success(), || format!("{learner} seed {seed}: not identified"))?;
            let m = out.metrics();
            if learner == "dllite-mq" {
                ensure(m.mq_count == space, || format!("seed {seed}: {} MQs, expected {space}", m.mq_count))?;
            } else {
                ensure(m.eq_count <= space + 1, || format!("seed {seed}: {} EQs", m.eq_count))?;
                max_eq = max_eq.max(m.eq_count);
            }
        }
    }
    Ok(format!("dllite-mq {space} MQs each, dllite-eq at most {max_eq} EQs (bound {}), 100/100 both", space + 1))
}

fn pac() -> Result<String, String> {
    let (eps, delta) = (0.2, 0.2);
    let framework = LearningFramework::new(FragmentId::DlLite);
    let mut failures = 0;
    let mut space = 0;
    for seed in 0..200u64 {
        let axioms = 1 + (seed % 4) as usize;
        let g: GenSpec = format!("fragment=dllite,sig=3,roles=1,axioms={axioms},seed={seed}").parse().unwrap();
        let sig = g.signature();
        let cfg = ExperimentConfig::new(FragmentId::DlLite, "pac(dllite-eq)".parse().unwrap(), TargetSource::Gen(g))
            .with_pac(eps, delta)
            .with_seed(seed);
        let out = run_experiment(&cfg).map_err(|e| e.to_string())?;
        let h = out.hypothesis.clone().ok_or_else(|| format!("seed {seed}: no hypothesis"))?;
        let examples: Vec<Example> = framework.enumerate_examples(&sig, 0, 0).collect();
        space = examples.len();
        let (rt, rh) = (Reasoner::new(&out.target), Reasoner::new(&h));
        let wrong = examples
            .iter()
            .filter(|e| framework.is_member_with(&rt, e).unwrap() != framework.is_member_with(&rh, e).unwrap())
            .count();
        if wrong as f64 / space as f64 > eps {
            failures += 1;
        }
    }
    let freq = failures as f64 / 200.0;
    ensure(freq <= delta + 0.05, || format!("failure frequency {freq}"))?;
    Ok(format!("failure frequency {freq:.3} (<= 0.25) over a {space}-axiom space"))
}

fn reproducibility() -> Result<String, String> {
    let cases = [
        ("toy-mq", "fragment=toy-atomic,sig=4,axioms=3"),
        ("horn-mqeq", "fragment=toy-conj,sig=6,axioms=4"),
        ("dllite-mq", "fragment=dllite,sig=3,roles=1,axioms=3"),
        ("dllite-eq", "fragment=dllite,sig=3,roles=1,axioms=3"),
        ("elh-enum-eq", "fragment=elh,sig=2,roles=1,axioms=1"),
        ("pac(dllite-eq)", "fragment=dllite,sig=3,roles=1,axioms=3"),
    ];
    for (learner, spec) in cases {
        let g: GenSpec = format!("{spec},seed=42").parse().unwrap();
        let run = || {
            let mut cfg =
                ExperimentConfig::new(g.fragment, learner.parse().unwrap(), TargetSource::Gen(g.clone())).with_seed(42);
            cfg.eq_strategy = elhlab_core::teacher::EqStrategy::RandomSeeded;
            if learner.starts_with("pac") {
                cfg = cfg.with_pac(0.1, 0.1);
            }
            run_experiment(&cfg).map(|o| o.transcript.to_json()).map_err(|e| e.to_string())
        };
        ensure(run()? == run()?, || format!("{learner}: transcripts differ"))?;
    }
    Ok(format!("{} learners, byte-identical transcripts", cases.len()))
}
