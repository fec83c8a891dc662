#include "matmi/config.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "matmi/error.hpp"

namespace matmi {

std::string to_string(Command c)
{
    switch (c) {
    case Command::Forward:
        return "forward";
    case Command::Invert:
        return "invert";
    case Command::Study:
        return "study";
    case Command::Phantom:
        return "phantom";
    }
    return "forward";
}

std::string to_string(DataMode m) { return m == DataMode::InCrime ? "in-crime" : "fine-mesh"; }

Command parse_command(std::string_view s)
{
    if (s == "forward") return Command::Forward;
    if (s == "invert") return Command::Invert;
    if (s == "study") return Command::Study;
    if (s == "phantom") return Command::Phantom;
    throw ConfigError("unknown command '" + std::string(s) + "'", "command");
}

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

std::vector<std::string> split_ws(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) {
        out.push_back(tok);
    }
    return out;
}

std::string fmt_real(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Entry {
    std::string value;
    int line;
};

class Reader {
public:
    explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    const Entry& raw(const std::string& key)
    {
        used_.insert(key);
        return entries_.at(key);
    }

    double real(const std::string& key, double fallback)
    {
        if (!has(key)) return fallback;
        const Entry& e = raw(key);
        return to_real(e.value, key, e.line);
    }

    long long integer(const std::string& key, long long fallback)
    {
        if (!has(key)) return fallback;
        const Entry& e = raw(key);
        return to_integer(e.value, key, e.line);
    }

    std::string text(const std::string& key, const std::string& fallback)
    {
        if (!has(key)) return fallback;
        return raw(key).value;
    }

    bool boolean(const std::string& key, bool fallback)
    {
        if (!has(key)) return fallback;
        const Entry& e = raw(key);
        if (e.value == "true" || e.value == "1") return true;
        if (e.value == "false" || e.value == "0") return false;
        throw ConfigError("expected true or false, got '" + e.value + "'", key, e.line);
    }

    std::vector<std::string> keys_with_prefix(const std::string& prefix) const
    {
        std::vector<std::string> out;
        for (const auto& [k, v] : entries_) {
            if (k.rfind(prefix, 0) == 0) out.push_back(k);
        }
        return out;
    }

    void reject_unused() const
    {
        for (const auto& [k, v] : entries_) {
            if (!used_.count(k)) {
                throw ConfigError("unknown key '" + k + "'", k, v.line);
            }
        }
    }

    static double to_real(const std::string& s, const std::string& key, int line)
    {
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(s.c_str(), &end);
        if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
            throw ConfigError("expected a finite real number, got '" + s + "'", key, line);
        }
        return v;
    }

    static long long to_integer(const std::string& s, const std::string& key, int line)
    {
        long long v = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
            throw ConfigError("expected an integer, got '" + s + "'", key, line);
        }
        return v;
    }

private:
    std::map<std::string, Entry> entries_;
    std::set<std::string> used_;
};

PhantomSpec read_phantom(Reader& r, const std::string& section, PhantomSpec spec)
{
    spec.background = r.real(section + ".background", spec.background);
    spec.collar_width = r.real(section + ".collar_width", spec.collar_width);

    std::map<long long, Bump> bumps;
    const std::string prefix = section + ".bump.";
    for (const auto& key : r.keys_with_prefix(prefix)) {
        const Entry& e = r.raw(key);
        const long long index = Reader::to_integer(key.substr(prefix.size()), key, e.line);
        if (index < 0) {
            throw ConfigError("bump index must be non-negative", key, e.line);
        }
        const auto parts = split_ws(e.value);
        if (parts.size() != 4) {
            throw ConfigError("bump needs 'cx cy amplitude width'", key, e.line);
        }
        Bump b;
        b.center = Vec2(Reader::to_real(parts[0], key, e.line), Reader::to_real(parts[1], key, e.line));
        b.amplitude = Reader::to_real(parts[2], key, e.line);
        b.width = Reader::to_real(parts[3], key, e.line);
        bumps[index] = b;
    }
    if (!bumps.empty()) {
        spec.bumps.clear();
        for (const auto& [idx, b] : bumps) {
            spec.bumps.push_back(b);
        }
    }
    return spec;
}

void write_phantom(std::ostringstream& out, const std::string& section, const PhantomSpec& spec)
{
    out << section << ".background = " << fmt_real(spec.background) << '\n';
    out << section << ".collar_width = " << fmt_real(spec.collar_width) << '\n';
    for (std::size_t k = 0; k < spec.bumps.size(); ++k) {
        const Bump& b = spec.bumps[k];
        out << section << ".bump." << k << " = " << fmt_real(b.center.x()) << ' '
            << fmt_real(b.center.y()) << ' ' << fmt_real(b.amplitude) << ' '
            << fmt_real(b.width) << '\n';
    }
}

} // namespace

RunConfig parse_config(std::string_view text)
{
    std::map<std::string, Entry> entries;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string body = trim(line);
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("expected 'key = value'", {}, lineno);
        }
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("empty key", {}, lineno);
        }
        if (entries.count(key)) {
            throw ConfigError("duplicate key '" + key + "'", key, lineno);
        }
        entries.emplace(key, Entry{value, lineno});
    }

    Reader r(std::move(entries));
    RunConfig c;
    if (r.has("command")) {
        const Entry& e = r.raw("command");
        try {
            c.command = parse_command(e.value);
        } catch (const ConfigError& err) {
            throw ConfigError("unknown command '" + e.value + "'", "command", e.line);
        }
    }
    const long long n = r.integer("mesh.n", c.mesh_n);
    if (n < 1 || n > 4096) {
        throw ConfigError("mesh.n must be in [1, 4096]", "mesh.n", r.raw("mesh.n").line);
    }
    c.mesh_n = static_cast<int>(n);
    c.bounds.x_min = r.real("domain.x_min", c.bounds.x_min);
    c.bounds.x_max = r.real("domain.x_max", c.bounds.x_max);
    c.bounds.y_min = r.real("domain.y_min", c.bounds.y_min);
    c.bounds.y_max = r.real("domain.y_max", c.bounds.y_max);

    c.phantom = read_phantom(r, "phantom", c.phantom);
    c.random_bumps = static_cast<int>(r.integer("phantom.random_bumps", c.random_bumps));
    c.random_amplitude = r.real("phantom.random_amplitude", c.random_amplitude);
    c.initial = read_phantom(r, "initial", c.initial);

    c.max_iterations = static_cast<int>(r.integer("recon.max_iterations", c.max_iterations));
    c.tolerance_update = r.real("recon.tolerance_update", c.tolerance_update);
    c.tolerance_misfit = r.real("recon.tolerance_misfit", c.tolerance_misfit);

    if (r.has("data.mode")) {
        const Entry& e = r.raw("data.mode");
        if (e.value == "in-crime") {
            c.data_mode = DataMode::InCrime;
        } else if (e.value == "fine-mesh") {
            c.data_mode = DataMode::FineMesh;
        } else {
            throw ConfigError("data.mode must be in-crime or fine-mesh", "data.mode", e.line);
        }
    }
    c.data_file = r.text("data.file", c.data_file);

    if (r.has("study.mesh_sizes")) {
        const Entry& e = r.raw("study.mesh_sizes");
        for (const auto& item : split(e.value, ',')) {
            c.study.mesh_sizes.push_back(
                static_cast<int>(Reader::to_integer(item, "study.mesh_sizes", e.line)));
        }
    }
    if (r.has("study.amplitude_scales")) {
        const Entry& e = r.raw("study.amplitude_scales");
        for (const auto& item : split(e.value, ',')) {
            c.study.amplitude_scales.push_back(
                Reader::to_real(item, "study.amplitude_scales", e.line));
        }
    }

    c.output_dir = r.text("output.dir", c.output_dir);
    c.write_vtk = r.boolean("output.vtk", c.write_vtk);
    if (r.has("seed")) {
        const Entry& e = r.raw("seed");
        std::uint64_t s = 0;
        const auto res = std::from_chars(e.value.data(), e.value.data() + e.value.size(), s);
        if (e.value.empty() || res.ec != std::errc() || res.ptr != e.value.data() + e.value.size()) {
            throw ConfigError("seed must be an unsigned 64-bit integer", "seed", e.line);
        }
        c.seed = s;
    }

    r.reject_unused();
    validate(c);
    return c;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read config file " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize(const RunConfig& c)
{
    std::ostringstream out;
    out << "command = " << to_string(c.command) << '\n';
    out << "mesh.n = " << c.mesh_n << '\n';
    out << "domain.x_min = " << fmt_real(c.bounds.x_min) << '\n';
    out << "domain.x_max = " << fmt_real(c.bounds.x_max) << '\n';
    out << "domain.y_min = " << fmt_real(c.bounds.y_min) << '\n';
    out << "domain.y_max = " << fmt_real(c.bounds.y_max) << '\n';
    write_phantom(out, "phantom", c.phantom);
    out << "phantom.random_bumps = " << c.random_bumps << '\n';
    out << "phantom.random_amplitude = " << fmt_real(c.random_amplitude) << '\n';
    write_phantom(out, "initial", c.initial);
    out << "recon.max_iterations = " << c.max_iterations << '\n';
    out << "recon.tolerance_update = " << fmt_real(c.tolerance_update) << '\n';
    out << "recon.tolerance_misfit = " << fmt_real(c.tolerance_misfit) << '\n';
    out << "data.mode = " << to_string(c.data_mode) << '\n';
    if (!c.data_file.empty()) {
        out << "data.file = " << c.data_file << '\n';
    }
    if (!c.study.mesh_sizes.empty()) {
        out << "study.mesh_sizes = ";
        for (std::size_t i = 0; i < c.study.mesh_sizes.size(); ++i) {
            out << (i ? ", " : "") << c.study.mesh_sizes[i];
        }
        out << '\n';
    }
    if (!c.study.amplitude_scales.empty()) {
        out << "study.amplitude_scales = ";
        for (std::size_t i = 0; i < c.study.amplitude_scales.size(); ++i) {
            out << (i ? ", " : "") << fmt_real(c.study.amplitude_scales[i]);
        }
        out << '\n';
    }
    out << "output.dir = " << c.output_dir << '\n';
    out << "output.vtk = " << (c.write_vtk ? "true" : "false") << '\n';
    out << "seed = " << c.seed << '\n';
    return out.str();
}

void validate(const RunConfig& c)
{
    if (c.mesh_n < 1) {
        throw ConfigError("mesh.n must be positive", "mesh.n");
    }
    if (!(c.bounds.x_min < c.bounds.x_max) || !(c.bounds.y_min < c.bounds.y_max)) {
        throw ConfigError("domain bounds are degenerate", "domain");
    }
    try {
        validate(c.phantom);
    } catch (const PreconditionError& e) {
        throw ConfigError(std::string("phantom: ") + e.what(), "phantom");
    }
    try {
        validate(c.initial);
    } catch (const PreconditionError& e) {
        throw ConfigError(std::string("initial: ") + e.what(), "initial");
    }
    if (c.random_bumps < 0 || c.random_bumps > 1000) {
        throw ConfigError("phantom.random_bumps must be in [0, 1000]", "phantom.random_bumps");
    }
    if (!(c.random_amplitude >= 0.0) || !(c.random_amplitude < c.phantom.background)) {
        throw ConfigError("phantom.random_amplitude must be in [0, background)",
                          "phantom.random_amplitude");
    }
    if (c.max_iterations < 1) {
        throw ConfigError("recon.max_iterations must be at least 1", "recon.max_iterations");
    }
    if (!(c.tolerance_update > 0.0)) {
        throw ConfigError("recon.tolerance_update must be positive", "recon.tolerance_update");
    }
    if (!(c.tolerance_misfit > 0.0)) {
        throw ConfigError("recon.tolerance_misfit must be positive", "recon.tolerance_misfit");
    }
    for (int n : c.study.mesh_sizes) {
        if (n < 1 || n > 4096) {
            throw ConfigError("study.mesh_sizes entries must be in [1, 4096]", "study.mesh_sizes");
        }
    }
    for (double a : c.study.amplitude_scales) {
        if (!(a >= 0.0) || !std::isfinite(a)) {
            throw ConfigError("study.amplitude_scales entries must be non-negative",
                              "study.amplitude_scales");
        }
    }
    if (c.command == Command::Study && c.study.mesh_sizes.empty()
        && c.study.amplitude_scales.empty()) {
        throw ConfigError("study needs study.mesh_sizes and/or study.amplitude_scales", "study");
    }
    if (c.output_dir.empty()) {
        throw ConfigError("output.dir must not be empty", "output.dir");
    }
}

PhantomSpec effective_phantom(const RunConfig& config)
{
    PhantomSpec spec = config.phantom;
    if (config.random_bumps > 0) {
        const auto extra = random_bumps(config.seed, config.random_bumps, config.random_amplitude);
        spec.bumps.insert(spec.bumps.end(), extra.begin(), extra.end());
    }
    return spec;
}

} // namespace matmi
