//! Support library for the `leafspace` command-line tool: the invariant
//! battery behind `leafspace check` and small input helpers shared with the
//! binary and the test suites.

pub mod battery;

use leafspace_core::model::{PointRef, Position};

/// Parse a point argument: `v:<vertex>` or `e:<edge>:<p>/<q>`.
pub fn parse_point(arg: &str) -> Result<PointRef, String> {
    let mut parts = arg.splitn(2, ':');
    match (parts.next(), parts.next()) {
        (Some("v"), Some(rest)) if !rest.is_empty() => Ok(PointRef::at_vertex(rest)),
        (Some("e"), Some(rest)) => {
            let (edge, pos) = rest
                .rsplit_once(':')
                .ok_or_else(|| format!("expected e:<edge>:<p>/<q>, got {arg:?}"))?;
            if edge.is_empty() {
                return Err(format!("empty edge id in {arg:?}"));
            }
            Ok(PointRef::OnEdge(edge.into(), parse_ratio(pos)?))
        }
        _ => Err(format!(
            "expected v:<vertex>, e:<edge>:<p>/<q>, or end:<name>, got {arg:?}"
        )),
    }
}

/// Parse a rational like `1/2` or `1`.
pub fn parse_ratio(s: &str) -> Result<Position, String> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: i64 = num
        .parse()
        .map_err(|_| format!("bad rational numerator {num:?}"))?;
    let d: i64 = den
        .parse()
        .map_err(|_| format!("bad rational denominator {den:?}"))?;
    if d == 0 {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Position::new(n, d))
}
