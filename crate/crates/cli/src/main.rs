fn main() {
    std::process::exit(voronoi_cur::run(std::env::args_os()));
}
