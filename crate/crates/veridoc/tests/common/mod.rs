//! Deterministic synthetic corpus: two templates, the reference dataset,
//! and one sample per verdict class. Every byte is a pure function of the
//! constants below, so CLI output against this corpus is stable enough for
//! golden-file comparison.

use std::fs;
use std::path::{Path, PathBuf};

use veridoc::io::write_png_gray;
use veridoc_core::canvas::GrayCanvas;
use veridoc_core::geom::Rect;
use veridoc_core::imgproc::GrayImage;
use veridoc_core::ocr::atlas::GlyphAtlas;

pub const PAGE_W: u32 = 400;
pub const PAGE_H: u32 = 560;

const INK: u8 = 0;
const PAPER: u8 = 255;

/// Field value boxes on the report page, also annotated in the manifest.
/// (field, x, y, w, h)
pub const REGIONS: [(&str, u32, u32, u32, u32); 5] = [
    ("name", 150, 120, 200, 12),
    ("ip_no", 150, 150, 200, 12),
    ("address", 150, 180, 200, 12),
    ("admitted", 150, 210, 200, 12),
    ("discharged", 150, 240, 200, 12),
];

pub const DATASET_TEXT: &str = "Name,IP.No,Address,Date of Admission,Date of Discharge\n\
JOY,570,KURNOOL,01-07-2022,03-07-2022\n\
JOEL,571,GUNTUR,02-07-2022,04-07-2022\n\
SMITH,572,KRISHNA,03-07-2022,05-07-2022\n\
JORDEN,573,GODAVARI,04-07-2022,06-07-2022\n\
WILLIAM,574,SARASWATHI,05-07-2022,07-07-2022\n\
STONE,575,VIZAG,06-07-2022,08-07-2022\n\
TONY,576,KODUMUR,07-07-2022,09-07-2022\n\
MARK,577,NR.PETA,08-07-2022,10-07-2022\n\
JOHN DOE,372758,HYDERABAD,18.07.23,23.08.23\n";

#[allow(dead_code)] // test binaries use different subsets
pub struct Corpus {
    pub dir: PathBuf,
    pub manifest: PathBuf,
    pub dataset: PathBuf,
    pub real: PathBuf,
    pub tampered: PathBuf,
    pub wrong_name: PathBuf,
    pub unrelated: PathBuf,
}

/// Medical-report page. `values` fills the annotated field boxes;
/// `tampered` relocates the logo and drops one body paragraph line down.
pub fn yashoda_page(values: Option<[&str; 5]>, tampered: bool) -> GrayImage {
    let atlas = GlyphAtlas::builtin();
    let mut c = GrayCanvas::new(PAGE_W, PAGE_H, PAPER);

    // header: logo block, hospital name, separator rule
    let logo = if tampered {
        Rect::new(312, 24, 64, 44)
    } else {
        Rect::new(24, 24, 64, 44)
    };
    c.fill_rect(logo, INK);
    c.draw_text(&atlas, "YASHODA HOSPITALS", 100, 30, INK);
    c.draw_text(&atlas, "MEDICAL REPORT", 100, 50, INK);
    c.fill_rect(Rect::new(24, 84, 352, 3), INK);

    // field labels beside the annotated value boxes
    for (label, y) in [
        ("NAME:", 120),
        ("IP.NO:", 150),
        ("ADDRESS:", 180),
        ("ADMITTED:", 210),
        ("DISCHARGED:", 240),
    ] {
        c.draw_text(&atlas, label, 36, y, INK);
    }
    if let Some(values) = values {
        for ((_, x, y, _, _), value) in REGIONS.iter().zip(values) {
            c.draw_text(&atlas, value, *x as i64, *y as i64, INK);
        }
    }

    c.fill_rect(Rect::new(24, 272, 352, 2), INK);

    // body paragraph; one line shifts down when tampered
    let body = [
        "THE PATIENT WAS ADMITTED WITH",
        "STABLE VITALS AND RESPONDED TO",
        "THE PRESCRIBED COURSE OF CARE.",
        "FOLLOW UP IN TWO WEEKS WITH",
        "REPORTS AND PRIOR PRESCRIPTIONS.",
        "DISCHARGE ADVICE WAS EXPLAINED",
        "TO THE ATTENDER IN DETAIL.",
        "NO ALLERGIES WERE RECORDED.",
    ];
    for (i, line) in body.iter().enumerate() {
        let mut y = 300 + i as i64 * 24;
        if tampered && i == 2 {
            y += 13;
        }
        c.draw_text(&atlas, line, 36, y, INK);
    }

    // footer
    c.fill_rect(Rect::new(24, 508, 352, 2), INK);
    c.draw_text(&atlas, "PAGE 1 OF 1", 150, 524, INK);
    c.into_image()
}

/// A visually different second template: bill with a table grid.
pub fn bill_page() -> GrayImage {
    let atlas = GlyphAtlas::builtin();
    let mut c = GrayCanvas::new(PAGE_W, 300, PAPER);
    c.draw_text(&atlas, "HOSPITAL BILL", 140, 24, INK);
    c.fill_rect(Rect::new(20, 48, 360, 2), INK);
    for row in 0..6 {
        c.fill_rect(Rect::new(20, 70 + row * 30, 360, 1), INK);
    }
    for col in [20, 180, 280, 379] {
        c.fill_rect(Rect::new(col, 70, 1, 151), INK);
    }
    c.draw_text(&atlas, "ITEM", 30, 76, INK);
    c.draw_text(&atlas, "QTY", 190, 76, INK);
    c.draw_text(&atlas, "AMOUNT", 290, 76, INK);
    c.draw_text(&atlas, "TOTAL: 12,500", 220, 250, INK);
    c.into_image()
}

/// Deterministic pseudo-noise page unrelated to any template.
pub fn unrelated_page() -> GrayImage {
    let mut state = 0x2545F4914F6CDD1Du64;
    GrayImage::from_fn(PAGE_W, PAGE_H, |_, _| {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 33) & 0xFF) as u8
    })
}

fn manifest_json() -> String {
    let regions: Vec<String> = REGIONS
        .iter()
        .map(|(field, x, y, w, h)| {
            format!("{{\"field\":\"{field}\",\"x\":{x},\"y\":{y},\"w\":{w},\"h\":{h}}}")
        })
        .collect();
    format!(
        "{{\n  \"version\": 1,\n  \"templates\": [\n    {{\n      \"id\": \"yashoda\",\n      \
         \"file\": \"yashoda.png\",\n      \
         \"doc_type_label\": \"Medical report; Hospital:Yashoda\",\n      \
         \"text_regions\": [{}],\n      \
         \"required_fields\": [\"Name\", \"IP.No\", \"Address\"]\n    }},\n    {{\n      \
         \"id\": \"bill\",\n      \"file\": \"bill.png\",\n      \
         \"doc_type_label\": \" BILL\",\n      \
         \"text_regions\": [],\n      \"required_fields\": []\n    }}\n  ]\n}}\n",
        regions.join(",")
    )
}

/// Write the whole corpus into `dir`.
pub fn build_corpus(dir: &Path) -> Corpus {
    fs::create_dir_all(dir).unwrap();
    let write = |name: &str, img: &GrayImage| {
        let path = dir.join(name);
        write_png_gray(&path, img).unwrap();
        path
    };

    write("yashoda.png", &yashoda_page(None, false));
    write("bill.png", &bill_page());
    let real = write(
        "real.png",
        &yashoda_page(
            Some(["JOHN DOE", "372758", "HYDERABAD", "18.07.23", "23.08.23"]),
            false,
        ),
    );
    let tampered = write(
        "tampered.png",
        &yashoda_page(
            Some(["JOHN DOE", "372758", "HYDERABAD", "18.07.23", "23.08.23"]),
            true,
        ),
    );
    let wrong_name = write(
        "wrongname.png",
        &yashoda_page(
            Some(["JANE ROE", "999999", "NOWHERE", "01.01.24", "02.01.24"]),
            false,
        ),
    );
    let unrelated = write("unrelated.png", &unrelated_page());

    let manifest = dir.join("manifest.json");
    fs::write(&manifest, manifest_json()).unwrap();
    let dataset = dir.join("dataset.csv");
    fs::write(&dataset, DATASET_TEXT).unwrap();

    Corpus {
        dir: dir.to_path_buf(),
        manifest,
        dataset,
        real,
        tampered,
        wrong_name,
        unrelated,
    }
}
