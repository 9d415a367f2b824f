use super::bits::{binary_add, double_by_append0, sum_proper_prefixes, Bits};
use super::CounterError;

/// Counter-machine steps from the blank tape to the normal form holding `v`:
/// every increment of a prefix costs two crossings of that prefix's right border,
/// so the count is `2 (v + sum of proper prefixes of v)`.
pub fn steps_to_config(v: u64) -> Result<u64, CounterError> {
    if v == 0 {
        return Err(CounterError::Domain("steps_to_config needs v >= 1".into()));
    }
    let prefixes: u64 = (1..64).map(|j| v >> j).sum();
    Ok(2 * (v + prefixes))
}

/// Same count computed with the digit-level operations the counter uses.
pub fn steps_to_config_bits(v: &Bits) -> Bits {
    double_by_append0(&binary_add(v, &sum_proper_prefixes(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::md_reference;

    #[test]
    fn small_values() {
        assert_eq!(steps_to_config(1).unwrap(), 2);
        assert_eq!(steps_to_config(2).unwrap(), 6);
        assert_eq!(steps_to_config(3).unwrap(), 8);
        assert_eq!(steps_to_config(4).unwrap(), 14);
        assert!(steps_to_config(0).is_err());
    }

    #[test]
    fn matches_reference_arrivals() {
        let mut t = 0;
        for v in 1..=200u64 {
            while md_reference(t).0 < v {
                t += 1;
            }
            assert_eq!(steps_to_config(v).unwrap(), t, "v = {v}");
            assert_eq!(steps_to_config_bits(&Bits::from_u64(v)).value(), Some(t));
        }
    }
}
