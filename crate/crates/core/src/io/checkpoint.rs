//! Binary physical-space checkpoints.
//!
//! Layout, little-endian: magic `ANISOFL1`; `u64 nx, ny`; `f64 lx, ly,
//! alpha1, alpha2, t`; `u64 kappa` (0 when the flux is off); then `nx·ny`
//! `f64` values, row-major with `x` varying slowest.

use std::fs;
use std::path::Path;

use ndarray::Array2;

use crate::error::{CheckpointError, Error, Result};
use crate::operators::{DissipationSpec, FluxSpec};
use crate::spectral::{GridSpec, PhysicalField};
use crate::timestepper::SimState;

pub const MAGIC: &[u8; 8] = b"ANISOFL1";
const HEADER_LEN: usize = 8 + 2 * 8 + 5 * 8 + 8;

/// Decoded checkpoint; the physical field is kept exactly as stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub t: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub flux: Option<FluxSpec>,
    pub field: PhysicalField,
}

impl Checkpoint {
    pub fn from_state(s: &SimState) -> Self {
        Self {
            t: s.t,
            alpha1: s.dissipation.alpha1(),
            alpha2: s.dissipation.alpha2(),
            flux: s.flux,
            field: s.physical(),
        }
    }

    /// Rebuilds the spectral state; the spectrum is recomputed and truncated
    /// to the flux band.
    pub fn into_state(self) -> Result<SimState> {
        let d = DissipationSpec::new(self.field.grid(), self.alpha1, self.alpha2)?;
        SimState::from_physical(self.t, &self.field, d, self.flux)
    }

    pub fn encode(&self) -> Vec<u8> {
        let g = self.field.grid();
        let mut out = Vec::with_capacity(HEADER_LEN + 8 * g.len());
        out.extend_from_slice(MAGIC);
        for n in [g.nx() as u64, g.ny() as u64] {
            out.extend_from_slice(&n.to_le_bytes());
        }
        for x in [g.lx(), g.ly(), self.alpha1, self.alpha2, self.t] {
            out.extend_from_slice(&x.to_le_bytes());
        }
        let kappa = self.flux.map_or(0, |f| f.kappa() as u64);
        out.extend_from_slice(&kappa.to_le_bytes());
        for v in self.field.values().iter() {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn decode(bytes: &[u8]) -> std::result::Result<Self, CheckpointError> {
        use CheckpointError::*;
        if bytes.len() < MAGIC.len() {
            return Err(Truncated);
        }
        if &bytes[..8] != MAGIC {
            return Err(BadMagic);
        }
        if bytes.len() < HEADER_LEN {
            return Err(Truncated);
        }
        let word = |i: usize| -> [u8; 8] { bytes[8 + 8 * i..16 + 8 * i].try_into().unwrap() };
        let (nx, ny) = (u64::from_le_bytes(word(0)), u64::from_le_bytes(word(1)));
        let [lx, ly, alpha1, alpha2, t] = [2, 3, 4, 5, 6].map(|i| f64::from_le_bytes(word(i)));
        let kappa = u64::from_le_bytes(word(7));

        let invalid = |m: String| InvalidHeader(m);
        let grid = usize::try_from(nx)
            .ok()
            .zip(usize::try_from(ny).ok())
            .ok_or_else(|| invalid(format!("grid {nx}x{ny} too large")))
            .and_then(|(nx, ny)| GridSpec::new(nx, ny, lx, ly).map_err(|e| invalid(e.to_string())))?;
        DissipationSpec::new(&grid, alpha1, alpha2).map_err(|e| invalid(e.to_string()))?;
        if !(t.is_finite() && t >= 0.0) {
            return Err(invalid(format!("time {t}")));
        }
        let flux = match kappa {
            0 => None,
            k => Some(
                u32::try_from(k)
                    .ok()
                    .and_then(|k| FluxSpec::new(k).ok())
                    .ok_or_else(|| invalid(format!("flux exponent {k}")))?,
            ),
        };

        let payload = &bytes[HEADER_LEN..];
        let want = grid.len().checked_mul(8).ok_or_else(|| invalid("grid too large".into()))?;
        if payload.len() < want {
            return Err(Truncated);
        }
        if payload.len() > want {
            return Err(invalid(format!("{} trailing bytes", payload.len() - want)));
        }
        let values: Vec<f64> = payload
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(NonfinitePayload);
        }
        let values = Array2::from_shape_vec(grid.shape(), values).expect("length checked above");
        let field = PhysicalField::new(grid, values).map_err(|e| invalid(e.to_string()))?;
        Ok(Self {
            t,
            alpha1,
            alpha2,
            flux,
            field,
        })
    }
}

pub fn checkpoint_write(s: &SimState, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, Checkpoint::from_state(s).encode())?;
    Ok(())
}

pub fn checkpoint_read(path: impl AsRef<Path>) -> Result<Checkpoint> {
    let path = path.as_ref();
    Checkpoint::decode(&fs::read(path)?).map_err(|kind| Error::Checkpoint {
        path: path.to_path_buf(),
        kind,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{forward_transform, make_grid};

    fn state(flux: Option<FluxSpec>) -> SimState {
        let g = make_grid(16, 8, 7.0, 3.0).unwrap();
        let u = PhysicalField::from_fn(g.clone(), |x, y| (x * 0.9).sin() * (-y * y).exp() + 0.1).unwrap();
        let d = DissipationSpec::new(&g, 1.5, 1.9).unwrap();
        SimState::new(2.75, forward_transform(&u), d, flux).unwrap()
    }

    #[test]
    fn round_trip_is_bit_exact_in_physical_space() {
        let dir = tempfile::tempdir().unwrap();
        for flux in [None, Some(FluxSpec::burgers()), Some(FluxSpec::new(3).unwrap())] {
            let s = state(flux);
            let p = dir.path().join("c.bin");
            checkpoint_write(&s, &p).unwrap();
            let c = checkpoint_read(&p).unwrap();
            assert_eq!(c, Checkpoint::from_state(&s));
            assert_eq!(c.field.values(), s.physical().values());
            assert_eq!(c.flux, flux);
            let back = c.into_state().unwrap();
            assert_eq!(back.t, 2.75);
            assert!(back.u_hat.sub(&s.u_hat).unwrap().max_abs() < 1e-13 * s.u_hat.max_abs());
        }
    }

    #[test]
    fn layout_is_fixed() {
        let bytes = Checkpoint::from_state(&state(Some(FluxSpec::burgers()))).encode();
        assert_eq!(&bytes[..8], b"ANISOFL1");
        assert_eq!(u64::from_le_bytes(bytes[8..16].try_into().unwrap()), 16);
        assert_eq!(u64::from_le_bytes(bytes[16..24].try_into().unwrap()), 8);
        assert_eq!(f64::from_le_bytes(bytes[24..32].try_into().unwrap()), 7.0);
        assert_eq!(f64::from_le_bytes(bytes[56..64].try_into().unwrap()), 2.75);
        assert_eq!(u64::from_le_bytes(bytes[64..72].try_into().unwrap()), 1);
        assert_eq!(bytes.len(), 72 + 16 * 8 * 8);
    }

    #[test]
    fn corrupt_files_are_rejected() {
        let good = Checkpoint::from_state(&state(None)).encode();
        assert_eq!(Checkpoint::decode(&good[..good.len() - 3]), Err(CheckpointError::Truncated));
        assert_eq!(Checkpoint::decode(&good[..40]), Err(CheckpointError::Truncated));
        assert_eq!(Checkpoint::decode(&good[..4]), Err(CheckpointError::Truncated));

        let mut bad = good.clone();
        bad[0] = b'X';
        assert_eq!(Checkpoint::decode(&bad), Err(CheckpointError::BadMagic));

        let mut nan = good.clone();
        nan[104..112].copy_from_slice(&f64::NAN.to_le_bytes());
        assert_eq!(Checkpoint::decode(&nan), Err(CheckpointError::NonfinitePayload));

        let mut alpha = good.clone();
        alpha[40..48].copy_from_slice(&2.5f64.to_le_bytes());
        assert!(matches!(Checkpoint::decode(&alpha), Err(CheckpointError::InvalidHeader(_))));

        let mut odd = good.clone();
        odd[8..16].copy_from_slice(&7u64.to_le_bytes());
        assert!(matches!(Checkpoint::decode(&odd), Err(CheckpointError::InvalidHeader(_))));

        let mut long = good;
        long.push(0);
        assert!(matches!(Checkpoint::decode(&long), Err(CheckpointError::InvalidHeader(_))));
    }

    #[test]
    fn read_reports_the_path() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("junk.bin");
        std::fs::write(&p, b"not a checkpoint").unwrap();
        match checkpoint_read(&p) {
            Err(Error::Checkpoint { path, kind }) => {
                assert_eq!(path, p);
                assert_eq!(kind, CheckpointError::BadMagic);
            }
            other => panic!("{other:?}"),
        }
    }
}
