fn main() {
    std::process::exit(jsynth::cli::run());
}
