//! Tuple notations used by the published coefficient tables.

use super::halfint::{parse_ints, HalfIntegralMatrix};
use crate::error::{Error, Result};

/// `[a,b,c]` ↦ the binary form `ax² + bxy + cy²`.
pub fn decode_binary(a: i64, b: i64, c: i64) -> HalfIntegralMatrix {
    HalfIntegralMatrix::new(vec![a, c], vec![b]).expect("degree 2 shape")
}

/// `[a,b,c;d,e,f]` ↦ diagonal `(a,b,c)` with `(g23, g13, g12) = (d, e, f)`.
pub fn decode_ternary(a: i64, b: i64, c: i64, d: i64, e: i64, f: i64) -> HalfIntegralMatrix {
    // stored order is (12), (13), (23)
    HalfIntegralMatrix::new(vec![a, b, c], vec![f, e, d]).expect("degree 3 shape")
}

/// The ten-entry degree-4 abbreviation
/// `(t11,t22,t33,t44,u12,u13,u23,u14,u24,u34)`, where every `u` is an entry
/// of `2T`.
pub fn decode_ozeki4(tuple: [i64; 10]) -> Result<HalfIntegralMatrix> {
    let [t11, t22, t33, t44, u12, u13, u23, u14, u24, u34] = tuple;
    // stored order is (12), (13), (14), (23), (24), (34)
    let t = HalfIntegralMatrix::new(vec![t11, t22, t33, t44], vec![u12, u13, u14, u23, u24, u34])?;
    if !t.is_positive_semidefinite() {
        return Err(Error::NotSemidefinite(format!("{tuple:?}")));
    }
    Ok(t)
}

/// Parses the command-line spelling of an index:
/// `a,b,c` (binary), `a,b,c:d,e,f` (ternary), or a bare single integer.
pub fn parse_table_spec(s: &str) -> Result<HalfIntegralMatrix> {
    if let Some((diag, off)) = s.split_once(':') {
        let d = parse_ints(diag)?;
        let o = parse_ints(off)?;
        return match (d.as_slice(), o.as_slice()) {
            (&[a, b, c], &[x, y, z]) => Ok(decode_ternary(a, b, c, x, y, z)),
            _ => Err(Error::Parse(format!("ternary index `{s}` needs 3+3 entries"))),
        };
    }
    match *parse_ints(s)?.as_slice() {
        [a] => HalfIntegralMatrix::new(vec![a], vec![]),
        [a, b, c] => Ok(decode_binary(a, b, c)),
        _ => Err(Error::Parse(format!("cannot read `{s}` as a binary or ternary index"))),
    }
}

pub fn parse_ozeki(s: &str) -> Result<HalfIntegralMatrix> {
    let v = parse_ints(s)?;
    let arr: [i64; 10] = v
        .try_into()
        .map_err(|_| Error::Parse(format!("degree-4 tuple `{s}` needs 10 entries")))?;
    decode_ozeki4(arr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Int;

    #[test]
    fn binary_examples() {
        let t = decode_binary(1, 0, 0);
        assert_eq!((t.diag(), t.doubled_off()), (&[1, 0][..], &[0][..]));
        let t = decode_binary(1, 1, 1);
        assert_eq!((t.diag(), t.doubled_off()), (&[1, 1][..], &[1][..]));
    }

    #[test]
    fn ternary_examples() {
        let t = decode_ternary(1, 1, 1, 1, 1, 1);
        assert_eq!(t.even_matrix(), vec![vec![2, 1, 1], vec![1, 2, 1], vec![1, 1, 2]]);
        let t = decode_ternary(1, 1, 1, 0, 0, 0);
        assert_eq!(t.doubled_off(), &[0, 0, 0]);
        let t = decode_ternary(1, 2, 3, 4, 5, 6);
        assert_eq!((t.doubled(1, 2), t.doubled(0, 2), t.doubled(0, 1)), (4, 5, 6));
    }

    #[test]
    fn ozeki_first_row() {
        let t = decode_ozeki4([2, 2, 2, 2, 0, 0, 0, 2, 2, 2]).unwrap();
        assert_eq!(
            t.even_matrix(),
            vec![vec![4, 0, 0, 2], vec![0, 4, 0, 2], vec![0, 0, 4, 2], vec![2, 2, 2, 4]]
        );
        assert_eq!(t.discriminant(), Int::from(64));
    }

    #[test]
    fn ozeki_rejects_indefinite() {
        assert!(matches!(
            decode_ozeki4([1, 1, 1, 1, 4, 0, 0, 0, 0, 0]),
            Err(Error::NotSemidefinite(_))
        ));
    }

    #[test]
    fn reading_u_as_t_entries_is_inconsistent() {
        // taking u_ij = t_ij would double every off-diagonal of 2T; the
        // printed d_T = 64 row then no longer has determinant 64
        let t = HalfIntegralMatrix::new(vec![2, 2, 2, 2], vec![0, 0, 4, 0, 4, 4]).unwrap();
        assert_ne!(t.discriminant(), Int::from(64));
    }

    #[test]
    fn command_line_spellings() {
        assert_eq!(parse_table_spec("1,0,1").unwrap(), decode_binary(1, 0, 1));
        assert_eq!(parse_table_spec("1,1,1:0,0,1").unwrap(), decode_ternary(1, 1, 1, 0, 0, 1));
        assert!(parse_table_spec("1,2").is_err());
        assert!(parse_ozeki("2,2,2,2,1,0,0,2,2,2").is_ok());
        assert!(parse_ozeki("2,2").is_err());
    }
}
