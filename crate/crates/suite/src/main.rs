//! The `voronoi-cur` entry point, rebuilt here so the acceptance target can
//! drive it as a subprocess.

fn main() {
    std::process::exit(voronoi_cur::run(std::env::args_os()));
}
