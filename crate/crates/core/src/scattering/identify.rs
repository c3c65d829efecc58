use crate::radial::State;
use crate::{Channel, Error, Result};

/// Image of a free partial wave under the identification `J`.
#[derive(Debug, Clone, PartialEq)]
pub enum JImage<D> {
    /// Same radial data, now in the monopole channel `(n, l, m)`.
    Monopole { channel: Channel, state: State<D> },
    /// `l < |n|`: no monopole harmonic exists and `J` annihilates the wave.
    Null,
}

impl<D> JImage<D> {
    pub fn is_null(&self) -> bool {
        matches!(self, JImage::Null)
    }

    pub fn channel(&self) -> Option<Channel> {
        match self {
            JImage::Monopole { channel, .. } => Some(*channel),
            JImage::Null => None,
        }
    }

    pub fn state(&self) -> Option<&State<D>> {
        match self {
            JImage::Monopole { state, .. } => Some(state),
            JImage::Null => None,
        }
    }
}

/// `J(psi (x) Y_{l,m}) = psi (x) Y_{n,l,m}` for `l >= |n|`, zero otherwise.
pub fn identify_j<D>(ell: u32, m: i32, state: &State<D>, n: i32) -> Result<JImage<D>> {
    if m.unsigned_abs() > ell {
        return Err(Error::Channel(format!("|m| = {} exceeds ell = {ell}", m.abs())));
    }
    if ell < n.unsigned_abs() {
        return Ok(JImage::Null);
    }
    Ok(JImage::Monopole { channel: Channel::new(n, ell, m)?, state: state.clone() })
}
