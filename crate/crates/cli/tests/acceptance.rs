//! One line per acceptance criterion; exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ieak::suites::{example_regression, run_suite, verify_cards, Suite, SuiteConfig, SuiteReport};
use ieak_cli::cards_fixture;

struct Criterion {
    id: usize,
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Result<(bool, String), String>,
}

fn suite(s: Suite) -> Result<SuiteReport, String> {
    run_suite(s, &SuiteConfig::for_suite(s)).map_err(|e| e.to_string())
}

fn summary(r: &SuiteReport) -> String {
    let mut s = format!("{} checks, {} failures", r.total_checks(), r.failure_count);
    if let Some(f) = r.failures.first() {
        s.push_str(&format!("; first: {f}"));
    }
    s
}

fn example() -> Result<(bool, String), String> {
    let fx = cards_fixture(None, None).map_err(|e| e.to_string())?;
    let ex = example_regression(&fx).map_err(|e| e.to_string())?;
    let failed: Vec<&str> = ex.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    Ok((ex.passed, format!("{} figure checks, failed: {failed:?}", ex.checks.len())))
}

fn soundness() -> Result<(bool, String), String> {
    let r = suite(Suite::Soundness)?;
    Ok((r.passed && r.total_checks() > 10_000, summary(&r)))
}

fn closure() -> Result<(bool, String), String> {
    let r = suite(Suite::AlgebraClosure)?;
    let mha = r.checks.get("product-mha").copied().unwrap_or(0) > 0 && r.checks.get("quotient-mha").copied().unwrap_or(0) > 0;
    Ok((r.passed && mha, summary(&r)))
}

fn duality() -> Result<(bool, String), String> {
    let r = suite(Suite::Duality)?;
    let update = r.checks.get("update-dual").copied().unwrap_or(0) > 0;
    Ok((r.passed && update, summary(&r)))
}

fn agreement() -> Result<(bool, String), String> {
    let r = suite(Suite::Agreement)?;
    Ok((r.passed && r.checks.get("agree") == Some(&1000), summary(&r)))
}

fn rewriter() -> Result<(bool, String), String> {
    let r = suite(Suite::Rewriter)?;
    Ok((r.passed && r.checks.get("equivalent") == Some(&200), summary(&r)))
}

fn cards() -> Result<(bool, String), String> {
    let fx = cards_fixture(None, None).map_err(|e| e.to_string())?;
    let r = verify_cards(&SuiteConfig::for_suite(Suite::Cards), &fx);
    let ik = r.checks.get("ik-sampled") == Some(&500);
    Ok((r.passed && ik, summary(&r)))
}

fn identities() -> Result<(bool, String), String> {
    let r = suite(Suite::Identities)?;
    Ok((r.passed, summary(&r)))
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { id: 1, name: "worked example figures", budget: secs(1), run: example },
        Criterion { id: 2, name: "reduction axiom soundness", budget: secs(300), run: soundness },
        Criterion { id: 3, name: "closure of product and update algebras", budget: None, run: closure },
        Criterion { id: 4, name: "duality", budget: secs(600), run: duality },
        Criterion { id: 5, name: "relational and algebraic agreement", budget: None, run: agreement },
        Criterion { id: 6, name: "normalizer", budget: None, run: rewriter },
        Criterion { id: 7, name: "card scenario entailment", budget: secs(600), run: cards },
        Criterion { id: 8, name: "algebraic identities", budget: None, run: identities },
    ];
    let mut all = true;
    for c in criteria {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let in_budget = c.budget.is_none_or(|b| elapsed <= b);
        let (ok, detail) = match result {
            Ok((ok, detail)) => (ok && in_budget, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        all &= ok;
        let budget = c.budget.map(|b| format!(" (budget {}s)", b.as_secs())).unwrap_or_default();
        println!(
            "criterion {} {}: {} in {:.2}s{budget}: {detail}",
            c.id,
            c.name,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
