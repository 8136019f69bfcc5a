// SPDX-License-Identifier: Apache-2.0

//! BSIM-style subthreshold current and direct gate tunneling.

use super::LeakageError;

const BOLTZMANN: f64 = 1.380_649e-23;
const CHARGE: f64 = 1.602_176_634e-19;
const EPS_OX: f64 = 3.9 * 8.854_187_812_8e-12;

/// Parameters of one transistor type. Voltages are magnitudes, so the same
/// expressions serve both NMOS and PMOS devices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceParams {
    /// Zero-bias mobility, m²/Vs.
    pub mu0: f64,
    /// Oxide capacitance per area, F/m².
    pub cox: f64,
    pub weff: f64,
    pub leff: f64,
    pub n_swing: f64,
    pub vt0: f64,
    pub delta_body: f64,
    pub eta_dibl: f64,
    /// Kelvin.
    pub temperature: f64,
    /// Oxide thickness, m.
    pub tox: f64,
    /// Tunneling barrier height, V.
    pub phi_ox: f64,
    /// Direct-tunneling prefactor, A/V².
    pub a_dt: f64,
    /// Direct-tunneling exponent constant, V/m.
    pub b_dt: f64,
    pub vdd: f64,
}

impl DeviceParams {
    /// Thermal voltage kT/q.
    pub fn thermal_voltage(&self) -> f64 {
        BOLTZMANN * self.temperature / CHARGE
    }

    pub fn validate(&self) -> Result<(), LeakageError> {
        let positive = [
            ("vdd", self.vdd),
            ("tox", self.tox),
            ("phi_ox", self.phi_ox),
            ("temperature", self.temperature),
            ("weff", self.weff),
            ("leff", self.leff),
            ("n_swing", self.n_swing),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(LeakageError::Param(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    fn set(&mut self, key: &str, v: f64) -> bool {
        match key {
            "mu0" => self.mu0 = v,
            "cox" => self.cox = v,
            "weff" => self.weff = v,
            "leff" => self.leff = v,
            "n_swing" => self.n_swing = v,
            "vt0" => self.vt0 = v,
            "delta_body" => self.delta_body = v,
            "eta_dibl" => self.eta_dibl = v,
            "temperature" => self.temperature = v,
            "tox" => self.tox = v,
            "phi_ox" => self.phi_ox = v,
            "a_dt" => self.a_dt = v,
            "b_dt" => self.b_dt = v,
            "vdd" => self.vdd = v,
            _ => return false,
        }
        true
    }
}

/// Subthreshold drain current in amperes.
///
/// `I = A exp((vgs - vt0 - δ vs + η vds) / (n kT/q)) (1 - exp(-vds / (kT/q)))`
/// with `A = μ0 Cox (W/L) (kT/q)² e^1.8`.
pub fn subthreshold_current(p: &DeviceParams, vgs: f64, vds: f64, vs: f64) -> f64 {
    let vt = p.thermal_voltage();
    let a = p.mu0 * p.cox * (p.weff / p.leff) * vt * vt * 1.8f64.exp();
    let exponent = (vgs - p.vt0 - p.delta_body * vs + p.eta_dibl * vds) / (p.n_swing * vt);
    a * exponent.exp() * (1.0 - (-vds / vt).exp())
}

/// Direct-tunneling current density in A/m² for an oxide drop `vox`.
///
/// `J = a (vox/tox)² exp(-b (1 - (1 - vox/φ)^1.5) / (vox/tox))`, defined on
/// `0 <= vox < φ` and 0 at `vox = 0`.
pub fn gate_tunneling_density(p: &DeviceParams, vox: f64) -> Result<f64, LeakageError> {
    if !(0.0..p.phi_ox).contains(&vox) {
        return Err(LeakageError::Domain {
            vox,
            phi_ox: p.phi_ox,
        });
    }
    if vox == 0.0 {
        return Ok(0.0);
    }
    let field = vox / p.tox;
    let barrier = 1.0 - (1.0 - vox / p.phi_ox).powf(1.5);
    Ok(p.a_dt * field * field * (-p.b_dt * barrier / field).exp())
}

/// Gate tunneling current of a whole device, in amperes.
pub fn gate_current(p: &DeviceParams, vox: f64) -> Result<f64, LeakageError> {
    Ok(gate_tunneling_density(p, vox)? * p.weff * p.leff)
}

/// An NMOS/PMOS pair sharing one supply.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Technology {
    pub nmos: DeviceParams,
    pub pmos: DeviceParams,
}

impl Default for Technology {
    fn default() -> Self {
        Technology::default_45nm()
    }
}

impl Technology {
    /// A 45 nm-class device pair at 0.9 V and 300 K.
    pub fn default_45nm() -> Technology {
        let tox = 1.1e-9;
        let cox = EPS_OX / tox;
        let nmos = DeviceParams {
            mu0: 0.04,
            cox,
            weff: 90e-9,
            leff: 45e-9,
            n_swing: 1.5,
            vt0: 0.333,
            delta_body: 0.1,
            eta_dibl: 0.1,
            temperature: 300.0,
            tox,
            phi_ox: 3.1,
            a_dt: 4.97e-7,
            b_dt: 1.793e10,
            vdd: 0.9,
        };
        let pmos = DeviceParams {
            mu0: 0.015,
            weff: 180e-9,
            vt0: 0.356,
            phi_ox: 4.5,
            a_dt: 3.42e-7,
            b_dt: 3.111e10,
            ..nmos
        };
        Technology { nmos, pmos }
    }

    pub fn vdd(&self) -> f64 {
        self.nmos.vdd
    }

    pub fn with_vdd(mut self, vdd: f64) -> Technology {
        self.nmos.vdd = vdd;
        self.pmos.vdd = vdd;
        self
    }

    /// Reads `key = value` lines over the 45 nm defaults.
    ///
    /// Keys prefixed with `nmos.` or `pmos.` set one device; bare keys set
    /// both. Changing `tox` without giving `cox` rescales `cox` to match.
    pub fn parse_params(text: &str) -> Result<Technology, LeakageError> {
        let mut t = Technology::default_45nm();
        let mut cox_given = [false, false];
        let mut tox_given = [false, false];
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let err = |m: String| LeakageError::Parse { line, message: m };
            let (k, v) = body
                .split_once('=')
                .ok_or_else(|| err("expected `key = value`".into()))?;
            let (k, v) = (k.trim(), v.trim());
            let value: f64 = v.parse().map_err(|_| err(format!("bad number `{v}`")))?;
            let (targets, key): (&[usize], &str) = match k.split_once('.') {
                Some(("nmos", key)) => (&[0], key),
                Some(("pmos", key)) => (&[1], key),
                Some((dev, _)) => return Err(err(format!("unknown device `{dev}`"))),
                None => (&[0, 1], k),
            };
            for &d in targets {
                let dev = if d == 0 { &mut t.nmos } else { &mut t.pmos };
                if !dev.set(key, value) {
                    return Err(err(format!("unknown parameter `{key}`")));
                }
                cox_given[d] |= key == "cox";
                tox_given[d] |= key == "tox";
            }
        }
        for (d, dev) in [&mut t.nmos, &mut t.pmos].into_iter().enumerate() {
            if tox_given[d] && !cox_given[d] {
                dev.cox = EPS_OX / dev.tox;
            }
        }
        t.nmos.validate()?;
        t.pmos.validate()?;
        if t.nmos.vdd != t.pmos.vdd {
            return Err(LeakageError::Param("nmos and pmos supply voltages differ".into()));
        }
        Ok(t)
    }

    /// Writes every parameter as `device.key = value`.
    pub fn to_params(&self) -> String {
        let mut s = String::new();
        for (name, d) in [("nmos", &self.nmos), ("pmos", &self.pmos)] {
            let rows = [
                ("mu0", d.mu0),
                ("cox", d.cox),
                ("weff", d.weff),
                ("leff", d.leff),
                ("n_swing", d.n_swing),
                ("vt0", d.vt0),
                ("delta_body", d.delta_body),
                ("eta_dibl", d.eta_dibl),
                ("temperature", d.temperature),
                ("tox", d.tox),
                ("phi_ox", d.phi_ox),
                ("a_dt", d.a_dt),
                ("b_dt", d.b_dt),
                ("vdd", d.vdd),
            ];
            for (k, v) in rows {
                s.push_str(&format!("{name}.{k} = {v:e}\n"));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_drain_bias_no_current() {
        let p = Technology::default().nmos;
        assert_eq!(subthreshold_current(&p, 0.0, 0.0, 0.0), 0.0);
        assert_eq!(subthreshold_current(&p, 0.3, 0.0, 0.2), 0.0);
    }

    #[test]
    fn current_grows_with_gate_voltage() {
        let p = Technology::default().nmos;
        let mut last = 0.0;
        for k in 0..100 {
            let vgs = -0.2 + 0.005 * k as f64;
            let i = subthreshold_current(&p, vgs, 0.9, 0.0);
            assert!(i > last);
            last = i;
        }
    }

    #[test]
    fn tunneling_domain() {
        let p = Technology::default().nmos;
        assert_eq!(gate_tunneling_density(&p, 0.0).unwrap(), 0.0);
        assert!(gate_tunneling_density(&p, -0.1).is_err());
        assert!(gate_tunneling_density(&p, p.phi_ox).is_err());
        assert!(gate_tunneling_density(&p, 1e-6).unwrap() < 1e-3);
    }

    #[test]
    fn params_round_trip_and_prefixes() {
        let t = Technology::default_45nm();
        assert_eq!(Technology::parse_params(&t.to_params()).unwrap(), t);
        let u = Technology::parse_params("vdd = 1.0\npmos.vt0 = 0.4 # comment\n").unwrap();
        assert_eq!(u.vdd(), 1.0);
        assert_eq!(u.pmos.vt0, 0.4);
        assert_eq!(u.nmos.vt0, t.nmos.vt0);
        let thin = Technology::parse_params("nmos.tox = 1.0e-9\n").unwrap();
        assert!(thin.nmos.cox > t.nmos.cox);
        assert!(Technology::parse_params("bogus = 1\n").is_err());
        assert!(Technology::parse_params("vdd = -1\n").is_err());
    }
}
