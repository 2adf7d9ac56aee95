//! Runs the property suites from code. `improper verify` does the same
//! from the command line.

use improper::verify::{run_suite, Suite, VerifyConfig};

fn main() {
    let config = VerifyConfig {
        seed: 7,
        samples: 50_000,
        ..Default::default()
    };
    let results = run_suite(Suite::All, &config);
    for r in &results {
        println!("{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} properties, {failed} failed", results.len());
}
