//! sRGB to CIE Lab conversion (D65 white point).

/// A color in CIE Lab space. `l` in [0, 100], `a`/`b` roughly in [-128, 127].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Lab {
    pub l: f64,
    pub a: f64,
    pub b: f64,
}

impl Lab {
    pub fn from_srgb(r: u8, g: u8, b: u8) -> Self {
        let [x, y, z] = srgb_to_xyz(r, g, b);
        xyz_to_lab(x, y, z)
    }

    /// Channels rescaled to [0,1]: `(L/100, (a+128)/255, (b+128)/255)`.
    ///
    /// Distances on these coordinates are commensurable with normalized
    /// depth differences, which is what the affinity kernel needs.
    pub fn normalized(&self) -> [f64; 3] {
        [
            self.l / 100.0,
            (self.a + 128.0) / 255.0,
            (self.b + 128.0) / 255.0,
        ]
    }
}

// D65 reference white.
const XN: f64 = 0.95047;
const YN: f64 = 1.0;
const ZN: f64 = 1.08883;

const EPSILON: f64 = 216.0 / 24389.0;
const KAPPA: f64 = 24389.0 / 27.0;

fn srgb_to_linear(c: u8) -> f64 {
    let c = c as f64 / 255.0;
    if c > 0.04045 {
        ((c + 0.055) / 1.055).powf(2.4)
    } else {
        c / 12.92
    }
}

fn srgb_to_xyz(r: u8, g: u8, b: u8) -> [f64; 3] {
    let r = srgb_to_linear(r);
    let g = srgb_to_linear(g);
    let b = srgb_to_linear(b);
    [
        r * 0.4124564 + g * 0.3575761 + b * 0.1804375,
        r * 0.2126729 + g * 0.7151522 + b * 0.0721750,
        r * 0.0193339 + g * 0.1191920 + b * 0.9503041,
    ]
}

fn xyz_to_lab(x: f64, y: f64, z: f64) -> Lab {
    fn f(t: f64) -> f64 {
        if t > EPSILON {
            t.cbrt()
        } else {
            (KAPPA * t + 16.0) / 116.0
        }
    }
    let fx = f(x / XN);
    let fy = f(y / YN);
    let fz = f(z / ZN);
    Lab {
        l: 116.0 * fy - 16.0,
        a: 500.0 * (fx - fy),
        b: 200.0 * (fy - fz),
    }
}
