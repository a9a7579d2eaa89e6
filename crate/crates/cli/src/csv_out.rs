use std::path::Path;

use disperscan::Interferogram;

use crate::error::CliError;

/// Scientific notation with 12 significant digits.
fn num(v: f64) -> String {
    format!("{v:.11e}")
}

/// Writes one row per delay. Columns: `tau1_ps,Rc,B,R0,Reven,Rodd` for the
/// analytic interferogram, followed by `Rc_oracle` when oracle rates are
/// given; an oracle-only table is `tau1_ps,Rc_oracle`.
pub fn emit_csv(
    path: &Path,
    taus: &[f64],
    analytic: Option<&Interferogram>,
    oracle: Option<&[f64]>,
) -> Result<(), CliError> {
    assert!(!taus.is_empty(), "empty interferogram");
    assert!(analytic.is_some() || oracle.is_some(), "nothing to write");
    if let Some(ig) = analytic {
        assert_eq!(ig.len(), taus.len());
    }
    if let Some(o) = oracle {
        assert_eq!(o.len(), taus.len());
    }
    let io = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(source) => CliError::io(path, source),
        other => CliError::io(path, std::io::Error::other(format!("{other:?}"))),
    };
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    let mut header = vec!["tau1_ps"];
    if analytic.is_some() {
        header.extend(["Rc", "B", "R0", "Reven", "Rodd"]);
    }
    if oracle.is_some() {
        header.push("Rc_oracle");
    }
    w.write_record(&header).map_err(io)?;
    for (i, &t) in taus.iter().enumerate() {
        let mut row = vec![num(t)];
        if let Some(ig) = analytic {
            let s = &ig.samples[i];
            row.extend([s.rc, s.b, s.r0, s.r_even, s.r_odd].map(num));
        }
        if let Some(o) = oracle {
            row.push(num(o[i]));
        }
        w.write_record(&row).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}
