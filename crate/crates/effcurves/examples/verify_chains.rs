//! Verifying the constant-assembly chains: exact exponent arithmetic for the
//! monomial identities and bisection certificates for the inequality corpus.

use effcurves::bounds::{builtin_corpus, verify_assembly, ChainStatus};
use num_rational::BigRational;

fn main() {
    let corpus = builtin_corpus();
    let lo = BigRational::new(1.into(), 100.into());
    let hi = BigRational::new(247.into(), 1000.into());

    let certs = verify_assembly(&corpus, &lo, &hi, 128, 40, 4);
    for cert in &certs {
        let tag = match cert.status {
            ChainStatus::Proved => "PROVED ",
            ChainStatus::Refuted => "REFUTED",
            ChainStatus::Unknown => "UNKNOWN",
        };
        println!("{tag} {}", cert.chain_id);
        for check in &cert.exponent_report {
            println!("    {}: computed {}, claimed {}", check.description, check.computed, check.claimed);
        }
        if let Some(w) = &cert.witness {
            println!("    witness: {w}");
        }
    }
}
