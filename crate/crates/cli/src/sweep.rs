//! `key=start:stop:step` sweeps and their Cartesian product.

use crate::Usage;

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub key: String,
    pub values: Vec<String>,
}

/// Parses one sweep. The stop value is included when the steps land on it
/// (up to rounding); values are printed with 12 significant digits so that
/// `0.1:0.9:0.2` yields `0.3`, not `0.30000000000000004`.
pub fn parse_sweep(text: &str) -> Result<Sweep, Usage> {
    let bad = |why: &str| Usage(format!("malformed sweep `{text}`: {why}"));
    let (key, range) = text.split_once('=').ok_or_else(|| bad("expected key=start:stop:step"))?;
    let parts: Vec<&str> = range.split(':').collect();
    let [start, stop, step] = parts[..] else {
        return Err(bad("expected start:stop:step"));
    };
    let num = |v: &str| v.trim().parse::<f64>().map_err(|_| bad("not a number"));
    let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
    if !(step > 0.0 && step.is_finite() && start.is_finite() && stop.is_finite()) {
        return Err(bad("step must be positive and bounds finite"));
    }
    if stop < start {
        return Err(bad("empty range"));
    }
    let count = ((stop - start) / step * (1.0 + 1e-9) + 1e-9).floor() as usize + 1;
    if count > 100_000 {
        return Err(bad("more than 100000 values"));
    }
    let values = (0..count).map(|i| format_value(start + i as f64 * step)).collect();
    Ok(Sweep { key: key.trim().to_string(), values })
}

fn format_value(v: f64) -> String {
    let rounded: f64 = format!("{v:.11e}").parse().expect("formatted float parses");
    rounded.to_string()
}

/// Every combination of sweep values, the last sweep varying fastest.
pub fn product(sweeps: &[Sweep]) -> Vec<Vec<(String, String)>> {
    let mut combos = vec![Vec::new()];
    for sweep in sweeps {
        combos = combos
            .into_iter()
            .flat_map(|prefix| {
                sweep.values.iter().map(move |v| {
                    let mut c = prefix.clone();
                    c.push((sweep.key.clone(), v.clone()));
                    c
                })
            })
            .collect();
    }
    combos
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inclusive_ranges() {
        let s = parse_sweep("s=0.1:0.9:0.2").unwrap();
        assert_eq!(s.values, ["0.1", "0.3", "0.5", "0.7", "0.9"]);
        assert_eq!(parse_sweep("t=1:1:0.5").unwrap().values, ["1"]);
        assert_eq!(parse_sweep("t=0:1:0.3").unwrap().values.len(), 4);
    }

    #[test]
    fn rejects_bad_sweeps() {
        for bad in ["s", "s=1:2", "s=a:2:1", "s=2:1:0.5", "s=0:1:0", "s=0:1:-1"] {
            assert!(parse_sweep(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn product_order() {
        let a = parse_sweep("a=1:3:1").unwrap();
        let b = parse_sweep("b=1:4:1").unwrap();
        let p = product(&[a, b]);
        assert_eq!(p.len(), 12);
        assert_eq!(p[1], vec![("a".to_string(), "1".to_string()), ("b".to_string(), "2".to_string())]);
    }
}
