#include "rphd/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

namespace rphd::config {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

[[noreturn]] void fail(std::string_view key, std::string_view value, std::string_view why) {
    throw ConfigError("config key '" + std::string(key) + "' = '" + std::string(value) + "': " + std::string(why));
}

double to_real(std::string_view key, std::string_view value) {
    value = trim(value);
    double v = 0.0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) fail(key, value, "expected a number");
    return v;
}

long long to_integer(std::string_view key, std::string_view value) {
    value = trim(value);
    long long v = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) fail(key, value, "expected an integer");
    return v;
}

int to_int(std::string_view key, std::string_view value) {
    const long long v = to_integer(key, value);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) fail(key, value, "out of range");
    return static_cast<int>(v);
}

std::uint64_t to_u64(std::string_view key, std::string_view value) {
    value = trim(value);
    std::uint64_t v = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) fail(key, value, "expected an unsigned integer");
    return v;
}

bool to_bool(std::string_view key, std::string_view value) {
    value = trim(value);
    if (value == "true" || value == "on" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "off" || value == "0" || value == "no") return false;
    fail(key, value, "expected true or false");
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    s = trim(s);
    if (s.empty()) return out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<double> to_reals(std::string_view key, std::string_view value) {
    std::vector<double> out;
    for (auto part : split(value, ',')) out.push_back(to_real(key, part));
    return out;
}

StateVector to_state(std::string_view key, std::string_view value) {
    const auto v = to_reals(key, value);
    if (v.size() != kStateDim) fail(key, value, "expected 4 comma-separated numbers");
    return {v[0], v[1], v[2], v[3]};
}

std::string exact(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string exact_join(const StateVector& s) {
    return exact(s[0]) + "," + exact(s[1]) + "," + exact(s[2]) + "," + exact(s[3]);
}

harness::Variant& variant_named(harness::RunConfig& config, std::string_view name) {
    for (auto& v : config.variants)
        if (v.name == name) return v;
    harness::Variant v;
    v.name = std::string(name);
    if (name == "separate") v.roughening.mode = roughening::Mode::Separate;
    if (name == "direct") v.roughening.mode = roughening::Mode::Direct;
    config.variants.push_back(v);
    return config.variants.back();
}

void set_variant_list(harness::RunConfig& config, std::string_view key, std::string_view value) {
    std::vector<harness::Variant> next;
    for (auto name : split(value, ',')) {
        if (name.empty()) fail(key, value, "empty variant name");
        next.push_back(variant_named(config, name));
    }
    if (next.empty()) fail(key, value, "at least one variant is required");
    config.variants = std::move(next);
}

void apply_variant_setting(harness::Variant& v, std::string_view field, std::string_view key, std::string_view value) {
    auto& r = v.roughening;
    if (field == "mode") {
        try {
            r.mode = roughening::parse_mode(trim(value));
        } catch (const std::invalid_argument& e) {
            fail(key, value, e.what());
        }
    } else if (field == "jitter_std") {
        const auto vals = to_reals(key, value);
        if (vals.size() == 1)
            r.jitter_std = {0.0, vals[0], 0.0, vals[0]};
        else if (vals.size() == kStateDim)
            r.jitter_std = {vals[0], vals[1], vals[2], vals[3]};
        else
            fail(key, value, "expected 1 (velocity) or 4 numbers");
    } else if (field == "gordon_k") {
        const std::string_view t = trim(value);
        if (t == "off" || t == "none") {
            r.gordon.reset();
        } else {
            if (!r.gordon) r.gordon.emplace();
            r.gordon->K = to_real(key, value);
            r.jitter_std = {};
        }
    } else if (field == "gordon_exponent") {
        if (!r.gordon) r.gordon.emplace();
        const std::string_view t = trim(value);
        if (t == "negative")
            r.gordon->exponent = roughening::GordonExponent::Negative;
        else if (t == "positive")
            r.gordon->exponent = roughening::GordonExponent::Positive;
        else
            fail(key, value, "expected negative or positive");
    } else if (field == "gordon_dims") {
        if (!r.gordon) r.gordon.emplace();
        const StateVector mask = to_state(key, value);
        for (std::size_t i = 0; i < kStateDim; ++i) r.gordon->dims[i] = mask[i] != 0.0;
    } else if (field == "selective_threshold") {
        const std::string_view t = trim(value);
        if (t == "off" || t == "none")
            r.selective_threshold.reset();
        else
            r.selective_threshold = to_real(key, value);
    } else if (field == "overlapped_only") {
        r.overlapped_only = to_bool(key, value);
    } else if (field == "cap_to_measurement") {
        r.cap_to_measurement = to_bool(key, value);
    } else {
        fail(key, value, "unknown roughening field");
    }
}

}  // namespace

std::vector<std::string> preset_names() { return {"paper-np200", "paper-np1000"}; }

harness::RunConfig preset(std::string_view name) {
    int np = 0;
    if (name == "paper-np200")
        np = 200;
    else if (name == "paper-np1000")
        np = 1000;
    else
        throw ConfigError("unknown preset '" + std::string(name) + "'");

    harness::RunConfig config;
    config.filter.particles_per_target = np;
    config.trials = 100;
    config.master_seed = 1;

    roughening::RougheningConfig separate;
    separate.mode = roughening::Mode::Separate;
    separate.jitter_std = {0.0, 0.4, 0.0, 0.4};
    roughening::RougheningConfig direct = separate;
    direct.mode = roughening::Mode::Direct;
    config.variants = {{"basic", {}}, {"separate", separate}, {"direct", direct}};
    return config;
}

void apply_setting(harness::RunConfig& c, std::string_view key, std::string_view value) {
    key = trim(key);
    if (key == "preset") {
        c = preset(trim(value));
    } else if (key == "run.trials") {
        c.trials = to_int(key, value);
    } else if (key == "run.master_seed") {
        c.master_seed = to_u64(key, value);
    } else if (key == "run.threads") {
        c.threads = to_int(key, value);
    } else if (key == "scenario.steps") {
        c.scenario.steps = to_int(key, value);
    } else if (key == "scenario.targets") {
        std::vector<scenario::TargetSpec> targets;
        for (auto part : split(value, ',')) {
            const auto window = split(part, ':');
            if (window.size() != 2) fail(key, value, "expected birth:death pairs");
            targets.push_back({to_int(key, window[0]), to_int(key, window[1]), std::nullopt});
        }
        c.scenario.targets = std::move(targets);
    } else if (key.starts_with("scenario.initial.")) {
        const int idx = to_int(key, key.substr(std::string_view("scenario.initial.").size()));
        if (idx < 0 || idx >= static_cast<int>(c.scenario.targets.size())) fail(key, value, "no such target");
        const std::string_view t = trim(value);
        if (t == "random")
            c.scenario.targets[static_cast<std::size_t>(idx)].initial.reset();
        else
            c.scenario.targets[static_cast<std::size_t>(idx)].initial = to_state(key, value);
    } else if (key == "motion.T") {
        c.models.motion.T = to_real(key, value);
    } else if (key == "motion.sigma_v1") {
        c.models.motion.sigma_v1 = to_real(key, value);
    } else if (key == "motion.sigma_v2") {
        c.models.motion.sigma_v2 = to_real(key, value);
    } else if (key == "measurement.sigma_w1") {
        c.models.measurement.sigma_w1 = to_real(key, value);
    } else if (key == "measurement.sigma_w2") {
        c.models.measurement.sigma_w2 = to_real(key, value);
    } else if (key == "birth.mass") {
        c.models.birth.mass = to_real(key, value);
    } else if (key == "birth.mean") {
        c.models.birth.mean = to_state(key, value);
    } else if (key == "birth.cov_diag") {
        c.models.birth.cov_diag = to_state(key, value);
    } else if (key == "clutter.rate") {
        c.models.clutter.rate = to_real(key, value);
    } else if (key == "clutter.region") {
        const StateVector r = to_state(key, value);
        c.models.clutter.region = {r[0], r[1], r[2], r[3]};
    } else if (key == "detection.p_survive") {
        c.models.detection.p_survive = to_real(key, value);
    } else if (key == "detection.p_detect") {
        c.models.detection.p_detect = to_real(key, value);
    } else if (key == "filter.particles_per_target") {
        c.filter.particles_per_target = to_int(key, value);
    } else if (key == "filter.birth_particles") {
        c.filter.birth_particles = to_int(key, value);
    } else if (key == "filter.min_particles") {
        c.filter.min_particles = to_int(key, value);
    } else if (key == "resample.scheme") {
        try {
            c.filter.scheme = resampling::parse_scheme(trim(value));
        } catch (const std::invalid_argument& e) {
            fail(key, value, e.what());
        }
    } else if (key == "ospa.cutoff") {
        c.ospa.cutoff = to_real(key, value);
    } else if (key == "ospa.order") {
        c.ospa.order = to_real(key, value);
    } else if (key == "ospa.full_state") {
        c.ospa_full_state = to_bool(key, value);
    } else if (key == "sweep.deltas") {
        c.sweep_deltas = to_reals(key, value);
    } else if (key == "roughening.variants") {
        set_variant_list(c, key, value);
    } else if (key.starts_with("roughening.")) {
        const std::string_view rest = key.substr(std::string_view("roughening.").size());
        const std::size_t dot = rest.rfind('.');
        if (dot == std::string_view::npos || dot == 0) fail(key, value, "expected roughening.<variant>.<field>");
        apply_variant_setting(variant_named(c, rest.substr(0, dot)), rest.substr(dot + 1), key, value);
    } else {
        fail(key, value, "unknown key");
    }
}

std::vector<std::pair<std::string, std::string>> parse_pairs(std::string_view text) {
    std::vector<std::pair<std::string, std::string>> out;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find('\n', start), text.size());
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) {
            if (end == text.size()) break;
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        const auto key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        out.emplace_back(std::string(key), std::string(trim(line.substr(eq + 1))));
        if (end == text.size()) break;
    }
    return out;
}

harness::RunConfig parse(std::string_view text) {
    const auto pairs = parse_pairs(text);
    harness::RunConfig config = preset("paper-np200");
    for (const auto& [k, v] : pairs)
        if (k == "preset") apply_setting(config, k, v);
    for (const auto& [k, v] : pairs)
        if (k == "roughening.variants") apply_setting(config, k, v);
    for (const auto& [k, v] : pairs)
        if (k != "preset" && k != "roughening.variants") apply_setting(config, k, v);
    try {
        config.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return config;
}

harness::RunConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string to_text(const harness::RunConfig& c) {
    std::ostringstream os;
    os << "run.trials = " << c.trials << '\n';
    os << "run.master_seed = " << c.master_seed << '\n';
    os << "run.threads = " << c.threads << '\n';
    os << "scenario.steps = " << c.scenario.steps << '\n';
    os << "scenario.targets = ";
    for (std::size_t i = 0; i < c.scenario.targets.size(); ++i)
        os << (i ? "," : "") << c.scenario.targets[i].birth_step << ':' << c.scenario.targets[i].death_step;
    os << '\n';
    for (std::size_t i = 0; i < c.scenario.targets.size(); ++i)
        if (c.scenario.targets[i].initial)
            os << "scenario.initial." << i << " = " << exact_join(*c.scenario.targets[i].initial) << '\n';
    os << "motion.T = " << exact(c.models.motion.T) << '\n';
    os << "motion.sigma_v1 = " << exact(c.models.motion.sigma_v1) << '\n';
    os << "motion.sigma_v2 = " << exact(c.models.motion.sigma_v2) << '\n';
    os << "measurement.sigma_w1 = " << exact(c.models.measurement.sigma_w1) << '\n';
    os << "measurement.sigma_w2 = " << exact(c.models.measurement.sigma_w2) << '\n';
    os << "birth.mass = " << exact(c.models.birth.mass) << '\n';
    os << "birth.mean = " << exact_join(c.models.birth.mean) << '\n';
    os << "birth.cov_diag = " << exact_join(c.models.birth.cov_diag) << '\n';
    os << "clutter.rate = " << exact(c.models.clutter.rate) << '\n';
    const auto& r = c.models.clutter.region;
    os << "clutter.region = " << exact_join({r.x_min, r.x_max, r.y_min, r.y_max}) << '\n';
    os << "detection.p_survive = " << exact(c.models.detection.p_survive) << '\n';
    os << "detection.p_detect = " << exact(c.models.detection.p_detect) << '\n';
    os << "filter.particles_per_target = " << c.filter.particles_per_target << '\n';
    os << "filter.birth_particles = " << c.filter.birth_particles << '\n';
    os << "filter.min_particles = " << c.filter.min_particles << '\n';
    os << "resample.scheme = " << resampling::to_string(c.filter.scheme) << '\n';
    os << "ospa.cutoff = " << exact(c.ospa.cutoff) << '\n';
    os << "ospa.order = " << exact(c.ospa.order) << '\n';
    os << "ospa.full_state = " << (c.ospa_full_state ? "true" : "false") << '\n';
    os << "sweep.deltas = ";
    for (std::size_t i = 0; i < c.sweep_deltas.size(); ++i) os << (i ? "," : "") << exact(c.sweep_deltas[i]);
    os << '\n';
    os << "roughening.variants = ";
    for (std::size_t i = 0; i < c.variants.size(); ++i) os << (i ? "," : "") << c.variants[i].name;
    os << '\n';
    for (const auto& v : c.variants) {
        const auto& rc = v.roughening;
        const std::string p = "roughening." + v.name + ".";
        os << p << "mode = " << roughening::to_string(rc.mode) << '\n';
        os << p << "jitter_std = " << exact_join(rc.jitter_std) << '\n';
        if (rc.gordon) {
            os << p << "gordon_k = " << exact(rc.gordon->K) << '\n';
            os << p << "gordon_exponent = "
               << (rc.gordon->exponent == roughening::GordonExponent::Negative ? "negative" : "positive") << '\n';
            const auto& d = rc.gordon->dims;
            os << p << "gordon_dims = " << d[0] << ',' << d[1] << ',' << d[2] << ',' << d[3] << '\n';
        }
        if (rc.selective_threshold) os << p << "selective_threshold = " << exact(*rc.selective_threshold) << '\n';
        os << p << "overlapped_only = " << (rc.overlapped_only ? "true" : "false") << '\n';
        os << p << "cap_to_measurement = " << (rc.cap_to_measurement ? "true" : "false") << '\n';
    }
    return os.str();
}

}  // namespace rphd::config
