//! Certifying an inequality over a box: parse it from the text format, then
//! bisect until every sub-box is certified or a counterexample appears.

use effcurves::certify::{certify_inequality, CertStatus};
use effcurves::expr::parse_inequality;

fn main() {
    let prec = 128;
    let max_depth = 40;

    for line in [
        "sinh(y) - y >= 0 on y in [0, 10]",
        "exp(x) - 1 - x - x^2 >= 0 on x in [2, 5]",
        // false on part of the box: the certifier returns a witness sub-box
        "cosh(x) - 2 >= 0 on x in [0, 3]",
    ] {
        let ineq = parse_inequality(line).expect("well-formed inequality");
        let res = certify_inequality(&ineq, prec, max_depth).expect("evaluable");
        match res.status {
            CertStatus::Proved => {
                println!("PROVED   {line}   ({} sub-boxes)", res.stats.subdomains)
            }
            CertStatus::Disproved(witness) => {
                let w: Vec<String> = witness
                    .iter()
                    .map(|(k, v)| format!("{k} in {}", v.to_enclosure_string(6)))
                    .collect();
                println!("REFUTED  {line}   witness: {}", w.join(", "));
            }
            CertStatus::Unknown => println!("UNKNOWN  {line}"),
        }
    }
}
