//! ASCII Gantt tables: one row per machine, one column per slot, a 1-indexed
//! job number (or blank) per cell.
//!
//! ```text
//! m1 | 1 | 4 | 3 | 2 | 5 |   |   | 6 |
//! m2 | 2 | 1 | 4 | 3 | 6 | 5 |   |   |
//! ```
//!
//! [`parse_gantt`] inverts [`render_gantt`], so fixture tables can be written
//! in the same shape they are printed.

use crate::error::Error;
use crate::shop::Schedule;
use crate::Result;

/// Render a feasible schedule as a machine × slot table spanning the makespan.
pub fn render_gantt(s: &Schedule) -> String {
    let (n, m) = (s.n(), s.m());
    let slots = s.makespan() as usize;
    let cell_w = n.to_string().len();
    let label_w = format!("m{m}").len();
    // cell[j][t] = job occupying machine j at slot t, if any
    let mut cell = vec![vec![None::<usize>; slots]; m];
    for i in 0..n {
        for j in 0..m {
            cell[j][s.start(i, j) as usize] = Some(i);
        }
    }
    let mut out = String::new();
    for (j, row) in cell.iter().enumerate() {
        out.push_str(&format!("{:<label_w$} |", format!("m{}", j + 1)));
        for c in row {
            match c {
                Some(i) => out.push_str(&format!(" {:>cell_w$} |", i + 1)),
                None => out.push_str(&format!(" {:>cell_w$} |", "")),
            }
        }
        out.push('\n');
    }
    out
}

/// Parse a Gantt table back into a schedule. Accepts ragged rows (trailing
/// idle columns may be omitted) and arbitrary cell widths; requires every job
/// to appear exactly once per machine row.
pub fn parse_gantt(text: &str) -> Result<Schedule> {
    let mut rows: Vec<Vec<Option<usize>>> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let Some((_, cells)) = line.split_once('|') else {
            return Err(Error::InvalidInput(format!("gantt row without cells: `{line}`")));
        };
        let mut parsed = Vec::new();
        for raw in cells.split('|') {
            let raw = raw.trim();
            if raw.is_empty() {
                parsed.push(None);
            } else {
                let v: usize = raw.parse().map_err(|_| {
                    Error::InvalidInput(format!("bad gantt cell `{raw}` in `{line}`"))
                })?;
                if v == 0 {
                    return Err(Error::InvalidInput("gantt jobs are 1-indexed".into()));
                }
                parsed.push(Some(v - 1));
            }
        }
        // A trailing `|` leaves one empty pseudo-cell; drop it.
        if line.ends_with('|') {
            parsed.pop();
        }
        rows.push(parsed);
    }
    if rows.is_empty() {
        return Err(Error::InvalidInput("empty gantt table".into()));
    }
    let m = rows.len();
    let n = 1 + rows
        .iter()
        .flatten()
        .flatten()
        .copied()
        .max()
        .ok_or_else(|| Error::InvalidInput("gantt table has no jobs".into()))?;
    let mut starts = vec![vec![u32::MAX; m]; n];
    for (j, row) in rows.iter().enumerate() {
        for (t, c) in row.iter().enumerate() {
            if let Some(i) = c {
                if starts[*i][j] != u32::MAX {
                    return Err(Error::InvalidInput(format!(
                        "job {} appears twice on machine {}",
                        i + 1,
                        j + 1
                    )));
                }
                starts[*i][j] = t as u32;
            }
        }
    }
    for (i, row) in starts.iter().enumerate() {
        if let Some(j) = row.iter().position(|&t| t == u32::MAX) {
            return Err(Error::InvalidInput(format!(
                "job {} missing from machine {}",
                i + 1,
                j + 1
            )));
        }
    }
    Schedule::from_rows(&starts)
}
