//! Runs the full identity registry in both scalar modes and prints one
//! line per check.
//!
//! Exact mode works over Q(sqrt 2), so a pass means the residual is the
//! zero form on the nose; float mode reports the worst residual seen and
//! classifies it against the tolerance bands.

use g2spin7::scalar::Exact;
use g2spin7::suite::{run_identities, SuiteConfig};

fn main() {
    let cfg = SuiteConfig { seed: 7, samples: 50, mutation: None };

    println!("exact mode, {} samples per check:", cfg.samples);
    for e in run_identities::<Exact>(&cfg) {
        println!("  {}  {:28} {}", if e.pass == Some(true) { "ok " } else { "BAD" }, e.id, e.value);
    }

    println!("\nfloat mode, worst residual per check:");
    for e in run_identities::<f64>(&cfg) {
        println!("  {}  {:28} {}", if e.pass == Some(true) { "ok " } else { "BAD" }, e.id, e.value);
    }
}
