#include "riesz_star/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include <nlohmann/json.hpp>

namespace riesz {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (res.ec != std::errc())
        throw IoError("format_double: to_chars failed");
    return std::string(buf.data(), res.ptr);
}

double parse_double(std::string_view text) {
    double out = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc() || res.ptr != last)
        throw IoError("parse_double: bad numeric field '" + std::string(text) + "'");
    return out;
}

void atomic_write(const fs::path& path, const std::string& content) {
    fs::path dir = path.parent_path();
    if (dir.empty()) dir = ".";
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec && !fs::is_directory(dir))
        throw IoError("atomic_write: cannot create directory " + dir.string());

    const fs::path tmp = dir / (path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("atomic_write: cannot open " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw IoError("atomic_write: short write to " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw IoError("atomic_write: rename to " + path.string() + " failed: " +
                      ec.message());
    }
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    std::array<char, 17> buf{};
    std::snprintf(buf.data(), buf.size(), "%016llx",
                  static_cast<unsigned long long>(value));
    return std::string(buf.data(), 16);
}

// ---------------------------------------------------------------------------

static json config_to_json_obj(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["s"] = c.s;
    j["gamma"] = c.gamma;
    j["n_grid"] = c.n_grid;
    j["tol"] = c.tol;
    j["relax"] = c.relax;
    j["eps0"] = c.eps0;
    j["t_end"] = c.t_end;
    j["dt"] = c.dt;
    j["integrator"] = c.integrator;
    j["snapshot_every"] = c.snapshot_every;
    j["seed"] = c.seed;
    j["out_dir"] = c.out_dir;
    j["strict_regime"] = c.strict_regime;
    return j;
}

std::string run_config_to_json(const RunConfig& config) {
    return config_to_json_obj(config).dump(2) + "\n";
}

RunConfig run_config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("run_config_from_json: ") + e.what());
    }
    RunConfig c;
    try {
        c.command = j.at("command").get<std::string>();
        c.s = j.at("s").get<double>();
        c.gamma = j.at("gamma").get<double>();
        c.n_grid = j.at("n_grid").get<int>();
        c.tol = j.at("tol").get<double>();
        c.relax = j.at("relax").get<double>();
        c.eps0 = j.at("eps0").get<double>();
        c.t_end = j.at("t_end").get<double>();
        c.dt = j.at("dt").get<double>();
        c.integrator = j.at("integrator").get<std::string>();
        c.snapshot_every = j.at("snapshot_every").get<int>();
        c.seed = j.at("seed").get<std::uint64_t>();
        c.out_dir = j.at("out_dir").get<std::string>();
        c.strict_regime = j.at("strict_regime").get<bool>();
    } catch (const json::exception& e) {
        throw IoError(std::string("run_config_from_json: missing field: ") + e.what());
    }
    return c;
}

std::string run_id(const RunConfig& config) {
    // dump() emits object keys sorted, so the id is canonical.
    return hex64(fnv1a64(config_to_json_obj(config).dump()));
}

// ---------------------------------------------------------------------------

void write_profile(const fs::path& csv_path, const fs::path& json_path,
                   const SteadyProfile& profile) {
    std::string csv = "x,rho,rho_gamma\n";
    const std::vector<double> pg = profile.rho_gamma();
    for (int k = -profile.n_half; k <= profile.n_half; ++k) {
        const std::size_t i = static_cast<std::size_t>(k + profile.n_half);
        csv += format_double(profile.x_of(k));
        csv += ',';
        csv += format_double(profile.rho[i]);
        csv += ',';
        csv += format_double(pg[i]);
        csv += '\n';
    }
    atomic_write(csv_path, csv);

    json j;
    j["s"] = profile.params.s;
    j["gamma"] = profile.params.gamma;
    j["h"] = profile.h;
    j["n_half"] = profile.n_half;
    j["radius"] = profile.radius;
    j["mass"] = profile.mass;
    j["fixed_point_residual"] = profile.fixed_point_residual;
    j["iterations"] = profile.iterations;
    atomic_write(json_path, j.dump(2) + "\n");
}

static std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

static std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SteadyProfile read_profile(const fs::path& csv_path, const fs::path& json_path) {
    json j;
    try {
        j = json::parse(slurp(json_path));
    } catch (const json::exception& e) {
        throw IoError("read_profile: bad JSON header: " + std::string(e.what()));
    }

    SteadyProfile prof;
    try {
        prof.params.s = j.at("s").get<double>();
        prof.params.gamma = j.at("gamma").get<double>();
        prof.h = j.at("h").get<double>();
        prof.n_half = j.at("n_half").get<int>();
        prof.radius = j.at("radius").get<double>();
        prof.mass = j.at("mass").get<double>();
        prof.fixed_point_residual = j.at("fixed_point_residual").get<double>();
        prof.iterations = j.at("iterations").get<int>();
    } catch (const json::exception& e) {
        throw IoError("read_profile: missing header field: " + std::string(e.what()));
    }
    if (prof.n_half < 1 || !(prof.h > 0.0))
        throw IoError("read_profile: degenerate header (n_half, h)");

    std::istringstream in(slurp(csv_path));
    std::string line;
    if (!std::getline(in, line) || line != "x,rho,rho_gamma")
        throw IoError("read_profile: expected header 'x,rho,rho_gamma' in " +
                      csv_path.string());

    prof.rho.clear();
    prof.rho.reserve(static_cast<std::size_t>(2 * prof.n_half + 1));
    int row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != 3)
            throw IoError("read_profile: malformed row in " + csv_path.string());
        const double x = parse_double(f[0]);
        const double rho = parse_double(f[1]);
        const double expect_x = (static_cast<double>(row) -
                                 static_cast<double>(prof.n_half)) * prof.h;
        if (std::fabs(x - expect_x) > 1e-9 * std::max(1.0, std::fabs(expect_x)))
            throw IoError("read_profile: x column inconsistent with header h");
        if (rho < 0.0)
            throw IoError("read_profile: negative density");
        prof.rho.push_back(rho);
        ++row;
    }
    if (row != 2 * prof.n_half + 1)
        throw IoError("read_profile: row count does not match n_half");

    double mass = 0.0;
    for (double v : prof.rho) mass += v;
    mass *= prof.h;
    if (std::fabs(mass - prof.mass) > 1e-9 * std::max(1.0, std::fabs(prof.mass)))
        throw IoError("read_profile: mass in header disagrees with table");
    return prof;
}

// ---------------------------------------------------------------------------

std::vector<std::pair<double, double>> read_series_csv(const fs::path& path,
                                                       const std::string& column) {
    std::istringstream in(slurp(path));
    std::string line;
    if (!std::getline(in, line))
        throw IoError("read_series_csv: empty file " + path.string());
    const std::vector<std::string> header = split_csv_line(line);
    if (header.empty() || header[0] != "t")
        throw IoError("read_series_csv: first column must be t");
    std::size_t col = header.size();
    for (std::size_t i = 1; i < header.size(); ++i)
        if (header[i] == column) {
            col = i;
            break;
        }
    if (col == header.size())
        throw IoError("read_series_csv: no column named '" + column + "'");

    std::vector<std::pair<double, double>> series;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != header.size())
            throw IoError("read_series_csv: ragged row in " + path.string());
        series.emplace_back(parse_double(f[0]), parse_double(f[col]));
    }
    return series;
}

// ---------------------------------------------------------------------------

std::string fit_record_to_json(const FitRecord& r) {
    json j;
    j["norm_name"] = r.norm_name;
    j["window"] = {r.t_lo, r.t_hi};
    j["slope"] = r.slope;
    j["r2"] = r.r2;
    j["n_samples"] = r.n_samples;
    j["pass"] = r.pass;
    return j.dump(2) + "\n";
}

void write_fit_json(const fs::path& path, const FitRecord& record) {
    atomic_write(path, fit_record_to_json(record));
}

void write_manifest(const fs::path& path, const RunConfig& config,
                    const std::vector<std::string>& outputs,
                    const std::string& profile_hash, const std::string& status,
                    double guard_time,
                    const std::vector<std::pair<std::string, double>>& metrics) {
    json j;
    j["config"] = config_to_json_obj(config);
    j["run_id"] = run_id(config);
    j["outputs"] = outputs;
    j["profile_hash"] = profile_hash;
    j["status"] = status;
    if (guard_time >= 0.0)
        j["guard_time"] = guard_time;
    else
        j["guard_time"] = nullptr;
    if (!metrics.empty()) {
        json m = json::object();
        for (const auto& kv : metrics) m[kv.first] = kv.second;
        j["metrics"] = m;
    }
    atomic_write(path, j.dump(2) + "\n");
}

}  // namespace riesz
