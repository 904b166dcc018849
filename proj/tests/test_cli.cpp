#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code;
    std::string out;
};

const fs::path& work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "qcc_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run(const std::string& arguments) {
    const fs::path out_path = work_dir() / "stdout.txt";
    const std::string command =
        std::string(QCC_CLI_PATH) + " " + arguments + " > " + out_path.string() + " 2>/dev/null";
    const int status = std::system(command.c_str());
    std::ifstream in(out_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return {WEXITSTATUS(status), buffer.str()};
}

std::string file_text(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

fs::path write_hamiltonian() {
    const fs::path path = work_dir() / "h.txt";
    std::ofstream out(path);
    out << "qubits: 4\n"
           "-0.8 Z0\n-0.9 Z1\n-1.1 Z2\n-0.7 Z3\n"
           "0.25 X0 X1\n-0.15 Y0 Y1 Z2\n0.2 X1 X2\n"
           "0.1 Z0 X2 X3\n-0.3 Z0 Z1\n0.12 Y2 Y3\n";
    return path;
}

fs::path write_diag_hamiltonian() {
    const fs::path path = work_dir() / "hdiag.txt";
    std::ofstream out(path);
    out << "qubits: 2\n-0.5 Z0\n0.75 Z1\n0.1 Z0 Z1\n";
    return path;
}

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        n += c == '\n';
    return n;
}

}  // namespace

TEST_CASE("optimize prints the optimum and a table") {
    const fs::path h = write_hamiltonian();
    const RunResult r =
        run("optimize --hamiltonian " + h.string() + " --order 2 --generators 8 --quiet");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("e_opt:") != std::string::npos);
    CHECK(r.out.find("t_opt") != std::string::npos);
    CHECK(r.out.find("Y0 X1") != std::string::npos);
}

TEST_CASE("exact on a diagonal Hamiltonian returns the smallest diagonal value") {
    const fs::path h = write_diag_hamiltonian();
    const RunResult r = run("exact --hamiltonian " + h.string());
    CHECK(r.exit_code == 0);
    // diagonal entries: +-0.5 -+0.75 +-0.1 -> minimum at z0=+1, z1=-1: -1.35
    CHECK(r.out.find("ground energy: -1.35") != std::string::npos);
}

TEST_CASE("fn-sweep emits one CSV row per cap") {
    const fs::path h = write_hamiltonian();
    const RunResult r =
        run("fn-sweep --hamiltonian " + h.string() + " --caps 4,8,16 --order 2");
    CHECK(r.exit_code == 0);
    CHECK(count_lines(r.out) == 4);  // header + 3 rows
    CHECK(r.out.rfind("cap,energy,final_dim,cumulative_norm_loss,seconds\n", 0) == 0);
}

TEST_CASE("rank honors the generator cut") {
    const fs::path h = write_hamiltonian();
    const RunResult r = run("rank --hamiltonian " + h.string() + " --generators 2");
    CHECK(r.exit_code == 0);
    CHECK(count_lines(r.out) == 4);  // e0 comment + header + 2 rows
}

TEST_CASE("exit codes: usage, input, numerical") {
    const fs::path h = write_hamiltonian();
    CHECK(run("").exit_code == 1);
    CHECK(run("optimize --no-such-flag").exit_code == 1);
    CHECK(run("optimize").exit_code == 1);  // missing --hamiltonian
    CHECK(run("convert --hamiltonian " + h.string()).exit_code == 1);  // missing --output

    const fs::path bad = work_dir() / "bad.txt";
    std::ofstream(bad) << "zzz Z0\n";
    CHECK(run("rank --hamiltonian " + bad.string()).exit_code == 2);
    CHECK(run("rank --hamiltonian /no/such/file").exit_code == 2);

    // an amplitude of exactly pi hits the reference-instability guard
    CHECK(run("dress --hamiltonian " + h.string() +
              " --generators 1 --amplitudes 3.141592653589793 --output " +
              (work_dir() / "d.txt").string())
              .exit_code == 3);
}

TEST_CASE("convert rewrites canonically and compresses") {
    const fs::path in = work_dir() / "dup.txt";
    std::ofstream(in) << "0.5 Z0\n1e-9 X0\n0.25 Z0\n";
    const fs::path out = work_dir() / "canon.txt";
    const RunResult r = run("convert --hamiltonian " + in.string() + " --threshold 1e-8" +
                            " --output " + out.string());
    CHECK(r.exit_code == 0);
    const std::string text = file_text(out);
    CHECK(text.find("qubits: 1") != std::string::npos);
    CHECK(text.find("0.75 Z0") != std::string::npos);
    CHECK(text.find("X0") == std::string::npos);
}

TEST_CASE("dress writes a Hamiltonian whose reference energy is the optimum") {
    const fs::path h = write_hamiltonian();
    const fs::path out = work_dir() / "dressed.txt";
    const fs::path json = work_dir() / "dress.json";
    const RunResult r = run("dress --hamiltonian " + h.string() +
                            " --generators 3 --order 3 --threshold 0 --output " + out.string() +
                            " --json " + json.string());
    CHECK(r.exit_code == 0);
    const RunResult exact_dressed = run("exact --hamiltonian " + out.string());
    CHECK(exact_dressed.exit_code == 0);

    const std::string report = file_text(json);
    const auto epos = report.find("\"e_opt\": ");
    REQUIRE(epos != std::string::npos);
    const double e_opt = std::stod(report.substr(epos + 9));
    const auto hpos = report.find("\"energy\": ");
    REQUIRE(hpos != std::string::npos);
    const double dressed_e0 = std::stod(report.substr(hpos + 10));
    CHECK(std::abs(e_opt - dressed_e0) < 1e-9);
}

TEST_CASE("iqcc runs from a config file") {
    const fs::path h = write_hamiltonian();
    const fs::path cfg = work_dir() / "iqcc.cfg";
    const fs::path json = work_dir() / "iqcc.json";
    std::ofstream(cfg) << "hamiltonian = " << h.string() << "\n"
                       << "json = " << json.string() << "\n"
                       << "[iqcc]\nmax_iterations = 6\nenergy_tol = 0\n"
                       << "[iteration]\ngenerators = 2\norder = 2\nthreshold = 5e-7\n";
    const fs::path snapshots = work_dir() / "snapshots";
    const RunResult r = run("iqcc --config " + cfg.string() + " --snapshots " +
                            snapshots.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("stop:") != std::string::npos);
    CHECK(r.out.find("final energy:") != std::string::npos);
    const std::string report = file_text(json);
    CHECK(report.find("\"records\"") != std::string::npos);
    CHECK(report.find("\"seconds\"") == std::string::npos);  // timings opt in
    CHECK(fs::exists(snapshots / "hamiltonian-1.txt"));
    CHECK(fs::exists(snapshots / "hamiltonian-6.txt"));
}

TEST_CASE("command-line flags override config values") {
    const fs::path h = write_hamiltonian();
    const fs::path cfg = work_dir() / "opt.cfg";
    const fs::path json = work_dir() / "opt.json";
    std::ofstream(cfg) << "hamiltonian = " << h.string() << "\norder = 1\ngenerators = 2\n";
    const RunResult r = run("optimize --config " + cfg.string() + " --order 2 --quiet --json " +
                            json.string());
    CHECK(r.exit_code == 0);
    const std::string report = file_text(json);
    CHECK(report.find("\"order\": 2") != std::string::npos);
}

TEST_CASE("optimize reuses the compiled-ansatz cache") {
    const fs::path h = write_hamiltonian();
    const fs::path cache = work_dir() / "cache";
    const fs::path j1 = work_dir() / "c1.json";
    const fs::path j2 = work_dir() / "c2.json";
    const std::string base = "optimize --hamiltonian " + h.string() +
                             " --order 2 --generators 3 --quiet --cache " + cache.string() +
                             " --json ";
    CHECK(run(base + j1.string()).exit_code == 0);
    std::size_t entries = 0;
    for (const auto& entry : fs::directory_iterator(cache)) {
        CHECK(entry.path().extension() == ".qcca");
        ++entries;
    }
    CHECK(entries == 1);
    CHECK(run(base + j2.string()).exit_code == 0);  // second run loads the entry
    CHECK(file_text(j1) == file_text(j2));
}

TEST_CASE("identical runs produce byte-identical JSON reports") {
    const fs::path h = write_hamiltonian();
    const fs::path j1 = work_dir() / "r1.json";
    const fs::path j2 = work_dir() / "r2.json";
    const std::string base = "optimize --hamiltonian " + h.string() +
                             " --order 3 --generators 3 --threads 2 --seed 7 --quiet --json ";
    CHECK(run(base + j1.string()).exit_code == 0);
    CHECK(run(base + j2.string()).exit_code == 0);
    const std::string a = file_text(j1);
    CHECK(!a.empty());
    CHECK(a == file_text(j2));

    const fs::path s1 = work_dir() / "s1.json";
    const fs::path s2 = work_dir() / "s2.json";
    const std::string sweep = "fn-sweep --hamiltonian " + h.string() +
                              " --caps 2,4,8 --order 2 --threads 2 --json ";
    CHECK(run(sweep + s1.string()).exit_code == 0);
    CHECK(run(sweep + s2.string()).exit_code == 0);
    const std::string s = file_text(s1);
    CHECK(!s.empty());
    CHECK(s == file_text(s2));
}

TEST_CASE("state dumps are sorted bitstring lines") {
    const fs::path h = write_hamiltonian();
    const fs::path state = work_dir() / "state.txt";
    const RunResult r = run("fn-sweep --hamiltonian " + h.string() +
                            " --caps 16 --order 2 --state-out " + state.string());
    CHECK(r.exit_code == 0);
    std::ifstream in(state);
    std::string bits_text, prev;
    double coeff;
    std::size_t rows = 0;
    while (in >> bits_text >> coeff) {
        CHECK(bits_text.size() == 4);
        if (!prev.empty())
            CHECK(prev < bits_text);
        prev = bits_text;
        ++rows;
    }
    CHECK(rows >= 1);
}
