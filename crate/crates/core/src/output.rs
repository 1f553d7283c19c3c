//! CSV output with full-precision, round-trippable floats.
//!
//! Every number is printed with 17 significant digits, positional when the
//! decimal exponent lies in [-4, 16] and scientific otherwise, with trailing
//! zeros trimmed. 17 digits make text -> f64 -> text the identity, so
//! repeated runs produce byte-identical files.

use std::io::{BufRead, Write};

use crate::coefficients::{MatrixMeta, PairMatrix};
use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::moment_sim::{MomentState, SweepResult};
use crate::ms_solver::MixtureState;

/// 17-significant-digit g-style formatting.
pub fn fmt_g17(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".to_string()
        } else if v > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let formatted = format!("{:.16e}", v);
    let (mantissa, exp_str) = formatted.split_once('e').expect("exponent marker");
    let exp: i32 = exp_str.parse().expect("decimal exponent");
    let neg = mantissa.starts_with('-');
    let digits: Vec<u8> = mantissa
        .bytes()
        .filter(|b| b.is_ascii_digit())
        .collect();
    debug_assert_eq!(digits.len(), 17);
    let digits = std::str::from_utf8(&digits).unwrap().to_string();

    let body = if (-4..=16).contains(&exp) {
        if exp >= 0 {
            let split = exp as usize + 1;
            let int_part = &digits[..split];
            let frac = digits[split..].trim_end_matches('0');
            if frac.is_empty() {
                int_part.to_string()
            } else {
                format!("{int_part}.{frac}")
            }
        } else {
            let leading = "0".repeat((-exp - 1) as usize);
            let all = format!("{leading}{digits}");
            format!("0.{}", all.trim_end_matches('0'))
        }
    } else {
        let frac = digits[1..].trim_end_matches('0');
        if frac.is_empty() {
            format!("{}e{exp}", &digits[..1])
        } else {
            format!("{}.{frac}e{exp}", &digits[..1])
        }
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

fn join_g17(values: &[f64]) -> String {
    values
        .iter()
        .map(|&v| fmt_g17(v))
        .collect::<Vec<_>>()
        .join(",")
}

fn default_names(order: usize) -> Vec<String> {
    (1..=order).map(|i| format!("s{i}")).collect()
}

/// Symmetric pair matrix as CSV: metadata comments, a species header row,
/// then one labeled row per species with an empty diagonal entry.
pub fn write_matrix_csv<W: Write>(w: &mut W, matrix: &PairMatrix, quantity: &str) -> Result<()> {
    let order = matrix.order();
    if order < 2 {
        return Err(Error::MatrixOrder { order });
    }
    writeln!(w, "# quantity: {quantity}")?;
    let names = match &matrix.meta {
        Some(meta) => {
            writeln!(w, "# species: {}", meta.species.join(","))?;
            writeln!(w, "# masses: {}", join_g17(&meta.masses))?;
            writeln!(w, "# temperature: {}", fmt_g17(meta.temperature))?;
            writeln!(w, "# boltzmann_k: {}", fmt_g17(meta.boltzmann_k))?;
            writeln!(
                w,
                "# total_concentration: {}",
                fmt_g17(meta.total_concentration)
            )?;
            writeln!(
                w,
                "# kernel_coefficients: {}",
                join_g17(&meta.kernel_coefficients)
            )?;
            writeln!(w, "# b_norms: {}", join_g17(&meta.b_norms))?;
            meta.species.clone()
        }
        None => default_names(order),
    };
    writeln!(w, "species,{}", names.join(","))?;
    for (i, name) in names.iter().enumerate() {
        let mut row = vec![name.clone()];
        for j in 0..order {
            if i == j {
                row.push(String::new());
            } else {
                row.push(fmt_g17(matrix.get(i, j)));
            }
        }
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

fn parse_f64(name: &str, field: &str) -> Result<f64> {
    field.trim().parse::<f64>().map_err(|_| Error::CsvFormat {
        name: name.to_string(),
        message: format!("not a number: {field:?}"),
    })
}

fn parse_f64_list(name: &str, value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|f| parse_f64(name, f))
        .collect()
}

/// Inverse of `write_matrix_csv`; returns the quantity label and the matrix
/// with any metadata it carried. Writing the result back reproduces the
/// original bytes.
pub fn read_matrix_csv<R: BufRead>(r: R, name: &str) -> Result<(String, PairMatrix)> {
    let bad = |message: String| Error::CsvFormat {
        name: name.to_string(),
        message,
    };
    let mut quantity = String::new();
    let mut species: Option<Vec<String>> = None;
    let mut masses = None;
    let mut temperature = None;
    let mut boltzmann_k = None;
    let mut total_concentration = None;
    let mut kernel_coefficients = None;
    let mut b_norms = None;
    let mut header: Option<Vec<String>> = None;
    let mut rows: Vec<(String, Vec<Option<f64>>)> = Vec::new();

    for line in r.lines() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("# ") {
            let (key, value) = rest
                .split_once(": ")
                .ok_or_else(|| bad(format!("malformed comment {line:?}")))?;
            match key {
                "quantity" => quantity = value.to_string(),
                "species" => species = Some(value.split(',').map(str::to_string).collect()),
                "masses" => masses = Some(parse_f64_list(name, value)?),
                "temperature" => temperature = Some(parse_f64(name, value)?),
                "boltzmann_k" => boltzmann_k = Some(parse_f64(name, value)?),
                "total_concentration" => total_concentration = Some(parse_f64(name, value)?),
                "kernel_coefficients" => kernel_coefficients = Some(parse_f64_list(name, value)?),
                "b_norms" => b_norms = Some(parse_f64_list(name, value)?),
                other => return Err(bad(format!("unknown metadata key {other:?}"))),
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if header.is_none() {
            if fields.first() != Some(&"species") {
                return Err(bad("header row must start with 'species'".into()));
            }
            header = Some(fields[1..].iter().map(|s| s.to_string()).collect());
            continue;
        }
        let mut values = Vec::with_capacity(fields.len() - 1);
        for f in &fields[1..] {
            if f.is_empty() {
                values.push(None);
            } else {
                values.push(Some(parse_f64(name, f)?));
            }
        }
        rows.push((fields[0].to_string(), values));
    }

    let header = header.ok_or_else(|| bad("missing header row".into()))?;
    let order = header.len();
    if rows.len() != order {
        return Err(bad(format!("{} rows for {order} columns", rows.len())));
    }
    let mut pairs = Vec::with_capacity(order * (order - 1) / 2);
    for i in 0..order {
        let (label, values) = &rows[i];
        if *label != header[i] {
            return Err(bad(format!(
                "row label {label:?} does not match column {:?}",
                header[i]
            )));
        }
        if values.len() != order {
            return Err(bad(format!("row {label:?} has {} entries", values.len())));
        }
        if values[i].is_some() {
            return Err(bad(format!("row {label:?} has a diagonal value")));
        }
        for j in (i + 1)..order {
            let upper = values[j]
                .ok_or_else(|| bad(format!("missing entry ({i}, {j})")))?;
            let lower = rows[j].1[i]
                .ok_or_else(|| bad(format!("missing entry ({j}, {i})")))?;
            if upper.to_bits() != lower.to_bits() {
                return Err(bad(format!("asymmetric entries at ({i}, {j})")));
            }
            pairs.push(upper);
        }
    }
    let mut matrix = PairMatrix::from_pairs(order, pairs)?;
    if let (Some(species), Some(masses)) = (species, masses) {
        matrix.meta = Some(MatrixMeta {
            species,
            masses,
            temperature: temperature.ok_or_else(|| bad("missing temperature".into()))?,
            boltzmann_k: boltzmann_k.ok_or_else(|| bad("missing boltzmann_k".into()))?,
            total_concentration: total_concentration
                .ok_or_else(|| bad("missing total_concentration".into()))?,
            kernel_coefficients: kernel_coefficients
                .ok_or_else(|| bad("missing kernel_coefficients".into()))?,
            b_norms: b_norms.ok_or_else(|| bad("missing b_norms".into()))?,
        });
    }
    Ok((quantity, matrix))
}

/// Diffusion-run snapshot: cell centers, concentrations, cell-centered
/// fluxes (mean of the two adjacent face values).
pub fn write_ms_snapshot<W: Write>(
    w: &mut W,
    grid: &Grid1D,
    state: &MixtureState,
    names: &[String],
    t: f64,
) -> Result<()> {
    writeln!(w, "# t: {}", fmt_g17(t))?;
    let mut header = vec!["x".to_string()];
    header.extend(names.iter().map(|n| format!("c_{n}")));
    header.extend(names.iter().map(|n| format!("F_{n}")));
    writeln!(w, "{}", header.join(","))?;
    for i in 0..grid.n_cells() {
        let mut row = vec![fmt_g17(grid.cell_center(i))];
        for s in 0..state.n_species() {
            row.push(fmt_g17(state.concentration(s, i)));
        }
        for s in 0..state.n_species() {
            let centered = 0.5 * (state.flux(s, i) + state.flux(s, i + 1));
            row.push(fmt_g17(centered));
        }
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

/// Moment-run snapshot: cell centers, concentrations, velocities.
pub fn write_kinetic_snapshot<W: Write>(
    w: &mut W,
    grid: &Grid1D,
    state: &MomentState,
    names: &[String],
    t: f64,
) -> Result<()> {
    writeln!(w, "# t: {}", fmt_g17(t))?;
    writeln!(w, "# eps: {}", fmt_g17(state.epsilon()))?;
    let mut header = vec!["x".to_string()];
    header.extend(names.iter().map(|n| format!("c_{n}")));
    header.extend(names.iter().map(|n| format!("u_{n}")));
    writeln!(w, "{}", header.join(","))?;
    for i in 0..grid.n_cells() {
        let mut row = vec![fmt_g17(grid.cell_center(i))];
        for s in 0..state.n_species() {
            row.push(fmt_g17(state.concentration(s, i)));
        }
        for s in 0..state.n_species() {
            row.push(fmt_g17(state.velocity(s, i)));
        }
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

/// Sweep summary table; the first observed-order cell is empty.
pub fn write_sweep_csv<W: Write>(w: &mut W, result: &SweepResult) -> Result<()> {
    writeln!(w, "# dt: {}", fmt_g17(result.dt))?;
    writeln!(w, "# reference_cells: {}", result.reference_cells)?;
    writeln!(
        w,
        "# max_momentum_residual: {}",
        fmt_g17(result.max_momentum_residual)
    )?;
    writeln!(w, "eps,l2_error,observed_order")?;
    for (k, (&eps, &err)) in result
        .epsilons
        .iter()
        .zip(result.l2_errors.iter())
        .enumerate()
    {
        let order = if k == 0 {
            String::new()
        } else {
            fmt_g17(result.observed_orders[k - 1])
        };
        writeln!(w, "{},{},{}", fmt_g17(eps), fmt_g17(err), order)?;
    }
    Ok(())
}
