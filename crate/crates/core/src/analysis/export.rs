use std::io::{self, Write};

use super::ratios::{ProfilePoint, Ratio, RatioMaps};
use crate::estimator::{ProbabilityEstimates, SiteEvent};

/// Per-site event probabilities, one row per site.
pub fn write_estimates_csv(est: &ProbabilityEstimates, mut w: impl Write) -> io::Result<()> {
    let spec = est.spec();
    write!(w, "row,column")?;
    for e in SiteEvent::ALL {
        write!(w, ",{}", e.name())?;
    }
    writeln!(w)?;
    for row in 0..spec.height() {
        for col in 0..spec.width() {
            let i = spec.index(col, row);
            write!(w, "{row},{col}")?;
            for e in SiteEvent::ALL {
                write!(w, ",{}", est.grid(e)[i])?;
            }
            writeln!(w)?;
        }
    }
    Ok(())
}

fn opt(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| x.to_string())
}

/// One ratio map: `row,column,value,error,defined`. Undefined sites have
/// empty value and error fields.
pub fn write_ratio_maps_csv(maps: &RatioMaps, ratio: Ratio, mut w: impl Write) -> io::Result<()> {
    let spec = maps.spec();
    writeln!(w, "row,column,value,error,defined")?;
    for row in 0..spec.height() {
        for col in 0..spec.width() {
            let i = spec.index(col, row);
            let defined = maps.is_defined(ratio, i) as u8;
            let value = opt(maps.value(ratio, i));
            let error = opt(maps.error(ratio, i));
            writeln!(w, "{row},{col},{value},{error},{defined}")?;
        }
    }
    Ok(())
}

/// A column profile in the same layout as the maps.
pub fn write_profile_csv(column: usize, profile: &[ProfilePoint], mut w: impl Write) -> io::Result<()> {
    writeln!(w, "row,column,value,error,defined")?;
    for p in profile {
        let defined = p.value.is_some() as u8;
        writeln!(w, "{},{column},{},{},{defined}", p.row, opt(p.value), opt(p.error))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{line_profiles, ratio_maps};
    use crate::lattice::LatticeSpec;

    fn estimates() -> ProbabilityEstimates {
        let spec = LatticeSpec::new(4, 3, 0.5, 1, 2).unwrap();
        ProbabilityEstimates::from_probabilities(&spec, 10, 0.25, |e, i| {
            if i == 0 { 0.0 } else { 0.1 * (e as usize + 1) as f64 }
        })
        .unwrap()
    }

    #[test]
    fn estimates_layout() {
        let mut buf = Vec::new();
        write_estimates_csv(&estimates(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 13);
        assert_eq!(lines[0], "row,column,boundary,anchor1,anchor2,both_anchors,interval,complement");
        assert_eq!(lines[1], "0,0,0,0,0,0,0,0");
        assert!(lines[12].starts_with("2,3,0.1,0.2,"));
    }

    #[test]
    fn map_marks_undefined_sites() {
        let maps = ratio_maps(&estimates());
        let mut buf = Vec::new();
        write_ratio_maps_csv(&maps, Ratio::R4, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[1], "0,0,,,0");
        assert!(lines[2].starts_with("0,1,") && lines[2].ends_with(",1"));

        let mut buf = Vec::new();
        write_profile_csv(1, &line_profiles(&maps, Ratio::R4, 1).unwrap(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(text.lines().nth(3).unwrap().starts_with("2,1,"));
    }
}
