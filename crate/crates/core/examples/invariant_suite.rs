//! Runs the invariant suite on the default scenario and prints failures.

use surfwave::config::ScenarioConfig;
use surfwave::verify;

fn main() {
    let report = verify::run(&ScenarioConfig::default());
    for c in &report.checks {
        if !c.passed {
            println!("FAIL {}/{}: {:.3e} vs {:.1e}", c.group, c.name, c.value, c.bound);
        }
    }
    println!("{} checks, passed: {}", report.checks.len(), report.passed);
}
