use super::detect::FaceBox;
use crate::signal_io::GrayImage;

pub const FACE_WIDTH: usize = 112;
pub const FACE_HEIGHT: usize = 128;

/// Nearest-neighbour resample of `face` to 112x128.
///
/// # Panics
///
/// If the box does not lie inside the image.
pub fn crop_face(img: &GrayImage, face: &FaceBox) -> GrayImage {
    assert!(
        face.fits(img.width(), img.height()),
        "box {face:?} outside {}x{} image",
        img.width(),
        img.height()
    );
    GrayImage::from_fn(FACE_WIDTH, FACE_HEIGHT, |ox, oy| {
        img.get(
            face.x + ox * face.w / FACE_WIDTH,
            face.y + oy * face.h / FACE_HEIGHT,
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pattern(w: usize, h: usize) -> GrayImage {
        GrayImage::from_fn(w, h, |x, y| ((x * 31 + y * 17) % 251) as u8)
    }

    #[test]
    fn identity_resample() {
        let img = pattern(130, 140);
        let out = crop_face(&img, &FaceBox::new(5, 7, 112, 128));
        for y in 0..128 {
            for x in 0..112 {
                assert_eq!(out.get(x, y), img.get(x + 5, y + 7));
            }
        }
    }

    #[test]
    fn exact_decimation() {
        let img = pattern(224, 256);
        let out = crop_face(&img, &FaceBox::new(0, 0, 224, 256));
        for y in 0..128 {
            for x in 0..112 {
                assert_eq!(out.get(x, y), img.get(2 * x, 2 * y));
            }
        }
    }

    #[test]
    fn constant_box() {
        let out = crop_face(&GrayImage::filled(40, 40, 77), &FaceBox::new(3, 4, 31, 31));
        assert_eq!((out.width(), out.height()), (112, 128));
        assert!(out.pixels().iter().all(|&p| p == 77));
    }
}
