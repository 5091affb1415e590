//! Per-axis grid specifications: `value` or `min:max:count`.

#[derive(Debug, Clone)]
pub struct Axis {
    pub values: Vec<f64>,
}

/// Parses `v` (a single point) or `min:max:count` with `count ≥ 1`.
pub fn parse_axis(name: &'static str, spec: &str) -> Result<Axis, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let values = match parts.as_slice() {
        [v] => vec![v
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("axis {name}: bad value '{v}': {e}"))?],
        [lo, hi, count] => {
            let lo: f64 = lo
                .trim()
                .parse()
                .map_err(|e| format!("axis {name}: bad min '{lo}': {e}"))?;
            let hi: f64 = hi
                .trim()
                .parse()
                .map_err(|e| format!("axis {name}: bad max '{hi}': {e}"))?;
            let count: usize = count
                .trim()
                .parse()
                .map_err(|e| format!("axis {name}: bad count '{count}': {e}"))?;
            if count == 0 {
                return Err(format!("axis {name}: count must be ≥ 1"));
            }
            if count == 1 {
                vec![lo]
            } else {
                let step = (hi - lo) / (count as f64 - 1.0);
                (0..count).map(|i| lo + step * i as f64).collect()
            }
        }
        _ => return Err(format!("axis {name}: expected 'v' or 'min:max:count'")),
    };
    let _ = name;
    Ok(Axis { values })
}

/// Cartesian product in row-major order (first axis slowest).
pub fn product(axes: &[Axis]) -> Vec<Vec<f64>> {
    let total: usize = axes.iter().map(|a| a.values.len()).product();
    let mut rows = Vec::with_capacity(total);
    let mut idx = vec![0usize; axes.len()];
    if axes.is_empty() {
        return rows;
    }
    'outer: loop {
        rows.push(
            idx.iter()
                .enumerate()
                .map(|(slot, &i)| axes[slot].values[i])
                .collect(),
        );
        for slot in (0..axes.len()).rev() {
            idx[slot] += 1;
            if idx[slot] < axes[slot].values.len() {
                continue 'outer;
            }
            idx[slot] = 0;
            if slot == 0 {
                break 'outer;
            }
        }
    }
    rows
}
