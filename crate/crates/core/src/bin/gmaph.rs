fn main() -> std::process::ExitCode {
    gmap_homology::cli::main()
}
