#include "cogsim/scenario.hpp"

#include <atomic>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace cogsim {

namespace {

struct Line {
    std::string section;
    std::string key;
    std::string value;
    int number;
};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const Line& ln, const std::string& what) {
    throw ConfigError("line " + std::to_string(ln.number) + ": key '" + ln.key + "' in [" +
                      ln.section + "]: " + what);
}

double as_double(const Line& ln) {
    double v = 0;
    auto [p, ec] = std::from_chars(ln.value.data(), ln.value.data() + ln.value.size(), v);
    if (ec != std::errc() || p != ln.value.data() + ln.value.size()) fail(ln, "expected a number");
    return v;
}

std::int64_t as_int(const Line& ln) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(ln.value.data(), ln.value.data() + ln.value.size(), v);
    if (ec != std::errc() || p != ln.value.data() + ln.value.size()) fail(ln, "expected an integer");
    return v;
}

std::uint64_t as_uint(const Line& ln) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(ln.value.data(), ln.value.data() + ln.value.size(), v);
    if (ec != std::errc() || p != ln.value.data() + ln.value.size())
        fail(ln, "expected a non-negative integer");
    return v;
}

bool as_bool(const Line& ln) {
    if (ln.value == "true" || ln.value == "1") return true;
    if (ln.value == "false" || ln.value == "0") return false;
    fail(ln, "expected true or false");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

Vec2 as_vec2(const Line& ln, const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 2) fail(ln, "expected x,y");
    try {
        return {std::stod(parts[0]), std::stod(parts[1])};
    } catch (const std::exception&) {
        fail(ln, "expected x,y numbers");
    }
}

std::vector<std::pair<double, std::uint64_t>> as_rate_table(const Line& ln) {
    std::vector<std::pair<double, std::uint64_t>> out;
    for (const auto& step : split(ln.value, ';')) {
        const auto kv = split(step, ':');
        if (kv.size() != 2) fail(ln, "expected snr:rate;snr:rate;...");
        try {
            out.emplace_back(std::stod(kv[0]), std::stoull(kv[1]));
        } catch (const std::exception&) {
            fail(ln, "expected snr:rate numbers");
        }
    }
    if (out.empty()) fail(ln, "rate table cannot be empty");
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i].first <= out[i - 1].first) fail(ln, "rate table thresholds must ascend");
    return out;
}

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

DeviceConfig& device_entry(Scenario& s, int id) {
    for (auto& d : s.devices)
        if (d.id == id) return d;
    DeviceConfig d;
    d.id = id;
    s.devices.push_back(d);
    return s.devices.back();
}

void parse_route(const Line& ln, RouteSpec& route) {
    const auto colon = ln.value.find(':');
    const std::string kind = colon == std::string::npos ? ln.value : ln.value.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : ln.value.substr(colon + 1);
    if (kind == "stationary") {
        route.kind = RouteSpec::Kind::Stationary;
    } else if (kind == "line") {
        route.kind = RouteSpec::Kind::Line;
        route.points = {as_vec2(ln, args)};
    } else if (kind == "l_shape") {
        const auto pts = split(args, ';');
        if (pts.size() != 2) fail(ln, "l_shape wants two corners x,y;x,y");
        route.kind = RouteSpec::Kind::LShape;
        route.points = {as_vec2(ln, pts[0]), as_vec2(ln, pts[1])};
    } else if (kind == "rectangle") {
        const auto pts = split(args, ';');
        if (pts.size() != 2) fail(ln, "rectangle wants two corners x,y;x,y");
        route.kind = RouteSpec::Kind::Rectangle;
        route.points = {as_vec2(ln, pts[0]), as_vec2(ln, pts[1])};
    } else if (kind == "waypoints") {
        route.kind = RouteSpec::Kind::Waypoints;
        route.points.clear();
        for (const auto& p : split(args, ';')) route.points.push_back(as_vec2(ln, p));
        if (route.points.empty()) fail(ln, "waypoints route needs points");
    } else if (kind == "random_waypoint") {
        const auto pts = split(args, ';');
        if (pts.size() != 3) fail(ln, "random_waypoint wants x,y;x,y;count");
        route.kind = RouteSpec::Kind::RandomWaypoint;
        route.points = {as_vec2(ln, pts[0]), as_vec2(ln, pts[1])};
        try {
            route.random_waypoints = std::stoi(pts[2]);
        } catch (const std::exception&) {
            fail(ln, "random_waypoint count must be an integer");
        }
    } else {
        fail(ln, "unknown route kind '" + kind + "'");
    }
}

void apply_line(Scenario& s, const Line& ln) {
    const std::string& sec = ln.section;
    const std::string& key = ln.key;

    if (sec == "run") {
        if (key == "duration_s") { s.duration_s = as_double(ln); return; }
        if (key == "seed") { s.seed = as_uint(ln); return; }
        if (key == "experiment") {
            if (ln.value == "cogcell") s.experiment = ExperimentKind::Cogcell;
            else if (ln.value == "access_mix") s.experiment = ExperimentKind::AccessMix;
            else if (ln.value == "bianchi") s.experiment = ExperimentKind::Bianchi;
            else if (ln.value == "discovery") s.experiment = ExperimentKind::Discovery;
            else if (ln.value == "rebeam") s.experiment = ExperimentKind::Rebeam;
            else fail(ln, "unknown experiment");
            return;
        }
    } else if (sec == "floorplan") {
        if (key == "preset") {
            if (ln.value != "four_room") fail(ln, "only the four_room preset exists");
            s.four_room_preset = true;
            return;
        }
        if (key == "width_m") { s.width_m = as_double(ln); return; }
        if (key == "height_m") { s.height_m = as_double(ln); return; }
        if (key == "rooms") {
            s.four_room_preset = false;
            s.custom_rooms.clear();
            for (const auto& r : split(ln.value, ';')) {
                const auto f = split(r, ',');
                if (f.size() != 4) fail(ln, "each room is x,y,w,h");
                try {
                    s.custom_rooms.push_back(
                        {std::stod(f[0]), std::stod(f[1]), std::stod(f[2]), std::stod(f[3])});
                } catch (const std::exception&) {
                    fail(ln, "room fields must be numbers");
                }
            }
            return;
        }
    } else if (sec == "wifi_ap") {
        if (key == "x_m") { s.wifi_ap.x = as_double(ln); return; }
        if (key == "y_m") { s.wifi_ap.y = as_double(ln); return; }
    } else if (sec == "picocells") {
        if (key == "auto") { s.picocells_auto = as_bool(ln); return; }
        if (key == "pico") {
            const auto colon = ln.value.find(':');
            if (colon == std::string::npos) fail(ln, "pico is room:x,y");
            try {
                s.picocells.emplace_back(std::stoi(ln.value.substr(0, colon)),
                                         as_vec2(ln, ln.value.substr(colon + 1)));
            } catch (const ConfigError&) {
                throw;
            } catch (const std::exception&) {
                fail(ln, "pico is room:x,y");
            }
            return;
        }
    } else if (sec == "mac") {
        if (key == "aifs_differentiation") { s.aifs_differentiation = as_bool(ln); return; }
        if (key == "sifs_us") { s.sifs_us = as_int(ln); return; }
        if (key == "slot_us") { s.slot_us = as_int(ln); return; }
    } else if (sec == "mac.req60" || sec == "mac.wifi24") {
        const int c = sec == "mac.req60" ? 0 : 1;
        if (key == "cw_min") { s.cw_min[c] = static_cast<int>(as_int(ln)); return; }
        if (key == "cw_max") { s.cw_max[c] = static_cast<int>(as_int(ln)); return; }
        if (key == "retry_limit") { s.retry_limit[c] = static_cast<int>(as_int(ln)); return; }
    } else if (sec == "mmwave") {
        if (key == "beamwidth_deg") { s.mm_beamwidth_deg = as_double(ln); return; }
        if (key == "cbap_duration_us") { s.cbap_duration_us = as_int(ln); return; }
    } else if (sec == "propagation") {
        if (key == "wall_loss_db") { s.wall_loss_db = as_double(ln); return; }
        if (key == "tx_power_dbm") { s.tx_power_dbm = as_double(ln); return; }
        if (key == "noise_floor_24_dbm") { s.noise_floor_24_dbm = as_double(ln); return; }
        if (key == "noise_floor_60_dbm") { s.noise_floor_60_dbm = as_double(ln); return; }
        if (key == "rate_table_24") { s.rate_table_24 = as_rate_table(ln); return; }
        if (key == "rate_table_60") { s.rate_table_60 = as_rate_table(ln); return; }
    } else if (sec == "discovery") {
        if (key == "devices") { s.discovery_devices = static_cast<int>(as_int(ln)); return; }
        if (key == "beamwidth_deg") { s.discovery_beamwidth_deg = as_double(ln); return; }
        if (key == "uncertainty_sectors") { s.uncertainty_sectors = static_cast<int>(as_int(ln)); return; }
        if (key == "estimate_sigma_deg") { s.estimate_sigma_deg = as_double(ln); return; }
        if (key == "mode") {
            if (ln.value == "standalone") s.discovery_mode = DiscoveryMode::Standalone;
            else if (ln.value == "assisted") s.discovery_mode = DiscoveryMode::Assisted;
            else if (ln.value == "both") s.discovery_mode = DiscoveryMode::Both;
            else fail(ln, "mode is standalone, assisted or both");
            return;
        }
    } else if (sec == "beamtrack") {
        if (key == "mode") {
            if (ln.value == "sensor_on") s.beam_mode = BeamtrackMode::SensorOn;
            else if (ln.value == "sensor_off") s.beam_mode = BeamtrackMode::SensorOff;
            else fail(ln, "mode is sensor_on or sensor_off");
            return;
        }
        if (key == "sample_period_us") { s.sample_period_us = as_int(ln); return; }
        if (key == "noise_sigma_deg") { s.sensor_sigma_deg = as_double(ln); return; }
        if (key == "beamwidth_deg") { s.track_beamwidth_deg = as_double(ln); return; }
    } else if (sec == "fallback") {
        if (key == "outage_threshold_us") { s.outage_threshold_us = as_int(ln); return; }
        if (key == "hysteresis_us") { s.hysteresis_us = as_int(ln); return; }
    } else if (sec == "traffic") {
        if (key == "mode") {
            if (ln.value == "saturated") s.saturated = true;
            else if (ln.value == "poisson") s.saturated = false;
            else fail(ln, "mode is saturated or poisson");
            return;
        }
        if (key == "stations_req60") { s.stations_req60 = static_cast<int>(as_int(ln)); return; }
        if (key == "stations_wifi24") { s.stations_wifi24 = static_cast<int>(as_int(ln)); return; }
        if (key == "arrival_per_s") { s.arrival_per_s = as_double(ln); return; }
    } else if (sec == "blockage") {
        if (key == "start_s") { s.blockage_start_s = as_double(ln); return; }
    } else if (sec.rfind("device ", 0) == 0) {
        int id = 0;
        try {
            id = std::stoi(sec.substr(7));
        } catch (const std::exception&) {
            fail(ln, "device section header must be [device <integer id>]");
        }
        DeviceConfig& d = device_entry(s, id);
        if (key == "x_m") { d.position.x = as_double(ln); return; }
        if (key == "y_m") { d.position.y = as_double(ln); return; }
        if (key == "route") { parse_route(ln, d.route); return; }
        if (key == "speed_mps") { d.route.speed_mps = as_double(ln); return; }
        if (key == "session_bytes") { d.session_bytes = as_uint(ln); return; }
        if (key == "session_start_s") { d.session_start_s = as_double(ln); return; }
    } else {
        throw ConfigError("line " + std::to_string(ln.number) + ": unknown section [" + sec + "]");
    }
    fail(ln, "unknown key");
}

void validate(const Scenario& s) {
    if (s.duration_s <= 0.0) throw ConfigError("run.duration_s must be positive");
    if (s.cbap_duration_us <= 0) throw ConfigError("mmwave.cbap_duration_us must be positive");
    if (s.sample_period_us <= 0) throw ConfigError("beamtrack.sample_period_us must be positive");
    if (s.outage_threshold_us <= 0 || s.hysteresis_us <= 0)
        throw ConfigError("fallback durations must be positive");
    if (s.mm_beamwidth_deg <= 0.0 || s.mm_beamwidth_deg > 360.0)
        throw ConfigError("mmwave.beamwidth_deg must be in (0, 360]");
    for (int c = 0; c < 2; ++c) {
        if (s.cw_min[c] > s.cw_max[c]) throw ConfigError("cw_min must not exceed cw_max");
        if (!is_power_of_two(s.cw_min[c]) || !is_power_of_two(s.cw_max[c]))
            throw ConfigError("contention windows must be powers of two");
        if (s.retry_limit[c] < 1) throw ConfigError("retry_limit must be at least 1");
    }

    const FloorPlan plan = build_floorplan(s);
    const int rooms = static_cast<int>(plan.rooms().size());
    if (!s.picocells_auto)
        for (const auto& [room, pos] : s.picocells) {
            if (room < 0 || room >= rooms)
                throw ConfigError("picocell references room " + std::to_string(room) +
                                  " but the floor plan has " + std::to_string(rooms) + " rooms");
            if (plan.room_of(pos) != room)
                throw ConfigError("picocell position lies outside its room");
        }
    for (const auto& d : s.devices) {
        if (plan.room_of(d.position) < 0)
            throw ConfigError("device " + std::to_string(d.id) + " is outside every room");
        for (const auto& p : d.route.points)
            if (d.route.kind == RouteSpec::Kind::Waypoints && plan.room_of(p) < 0)
                throw ConfigError("device " + std::to_string(d.id) + " route leaves the floor plan");
    }
}

} // namespace

Scenario default_scenario() {
    Scenario s;
    s.name = "default";
    DeviceConfig d;
    d.id = 1;
    d.position = {2.0, 2.0};
    s.devices.push_back(d);
    return s;
}

Scenario parse_scenario(const std::string& text, const std::string& name) {
    Scenario s;
    s.name = name;
    std::istringstream is(text);
    std::string raw;
    std::string section;
    int number = 0;
    while (std::getline(is, raw)) {
        ++number;
        const auto hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(number) + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(number) + ": expected key = value");
        Line ln{section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), number};
        if (ln.section.empty())
            throw ConfigError("line " + std::to_string(number) + ": key outside any section");
        apply_line(s, ln);
    }
    validate(s);
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    auto slash = path.find_last_of('/');
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    if (auto dot = name.rfind('.'); dot != std::string::npos) name = name.substr(0, dot);
    return parse_scenario(buf.str(), name);
}

namespace {

using Setter = std::function<void(Scenario&, const Line&)>;

const std::map<std::string, Setter>& registry() {
    static const std::map<std::string, Setter> reg = [] {
        std::map<std::string, Setter> r;
        r["run.duration_s"] = [](Scenario& s, const Line& l) { s.duration_s = as_double(l); };
        r["run.seed"] = [](Scenario& s, const Line& l) { s.seed = as_uint(l); };
        r["wifi_ap.x_m"] = [](Scenario& s, const Line& l) { s.wifi_ap.x = as_double(l); };
        r["wifi_ap.y_m"] = [](Scenario& s, const Line& l) { s.wifi_ap.y = as_double(l); };
        r["mac.sifs_us"] = [](Scenario& s, const Line& l) { s.sifs_us = as_int(l); };
        r["mac.slot_us"] = [](Scenario& s, const Line& l) { s.slot_us = as_int(l); };
        r["mac.aifs_differentiation"] = [](Scenario& s, const Line& l) {
            s.aifs_differentiation = as_bool(l);
        };
        for (int c = 0; c < 2; ++c) {
            const std::string base = c == 0 ? "mac.req60." : "mac.wifi24.";
            r[base + "cw_min"] = [c](Scenario& s, const Line& l) {
                s.cw_min[c] = static_cast<int>(as_int(l));
            };
            r[base + "cw_max"] = [c](Scenario& s, const Line& l) {
                s.cw_max[c] = static_cast<int>(as_int(l));
            };
            r[base + "retry_limit"] = [c](Scenario& s, const Line& l) {
                s.retry_limit[c] = static_cast<int>(as_int(l));
            };
        }
        r["mmwave.beamwidth_deg"] = [](Scenario& s, const Line& l) { s.mm_beamwidth_deg = as_double(l); };
        r["mmwave.cbap_duration_us"] = [](Scenario& s, const Line& l) { s.cbap_duration_us = as_int(l); };
        r["propagation.wall_loss_db"] = [](Scenario& s, const Line& l) { s.wall_loss_db = as_double(l); };
        r["propagation.tx_power_dbm"] = [](Scenario& s, const Line& l) { s.tx_power_dbm = as_double(l); };
        r["propagation.noise_floor_24_dbm"] = [](Scenario& s, const Line& l) {
            s.noise_floor_24_dbm = as_double(l);
        };
        r["propagation.noise_floor_60_dbm"] = [](Scenario& s, const Line& l) {
            s.noise_floor_60_dbm = as_double(l);
        };
        r["discovery.devices"] = [](Scenario& s, const Line& l) {
            s.discovery_devices = static_cast<int>(as_int(l));
        };
        r["discovery.beamwidth_deg"] = [](Scenario& s, const Line& l) {
            s.discovery_beamwidth_deg = as_double(l);
        };
        r["discovery.uncertainty_sectors"] = [](Scenario& s, const Line& l) {
            s.uncertainty_sectors = static_cast<int>(as_int(l));
        };
        r["discovery.estimate_sigma_deg"] = [](Scenario& s, const Line& l) {
            s.estimate_sigma_deg = as_double(l);
        };
        r["beamtrack.sample_period_us"] = [](Scenario& s, const Line& l) {
            s.sample_period_us = as_int(l);
        };
        r["beamtrack.noise_sigma_deg"] = [](Scenario& s, const Line& l) {
            s.sensor_sigma_deg = as_double(l);
        };
        r["beamtrack.beamwidth_deg"] = [](Scenario& s, const Line& l) {
            s.track_beamwidth_deg = as_double(l);
        };
        r["fallback.outage_threshold_us"] = [](Scenario& s, const Line& l) {
            s.outage_threshold_us = as_int(l);
        };
        r["fallback.hysteresis_us"] = [](Scenario& s, const Line& l) { s.hysteresis_us = as_int(l); };
        r["traffic.stations_req60"] = [](Scenario& s, const Line& l) {
            s.stations_req60 = static_cast<int>(as_int(l));
        };
        r["traffic.stations_wifi24"] = [](Scenario& s, const Line& l) {
            s.stations_wifi24 = static_cast<int>(as_int(l));
        };
        r["traffic.arrival_per_s"] = [](Scenario& s, const Line& l) { s.arrival_per_s = as_double(l); };
        r["blockage.start_s"] = [](Scenario& s, const Line& l) { s.blockage_start_s = as_double(l); };
        return r;
    }();
    return reg;
}

} // namespace

void apply_override(Scenario& s, const std::string& key, const std::string& value) {
    const auto it = registry().find(key);
    if (it == registry().end())
        throw ConfigError("'" + key + "' is not an overridable scalar parameter");
    Line ln{key, key, value, 0};
    it->second(s, ln);
}

void validate_scenario(const Scenario& s) { validate(s); }

std::vector<std::string> overridable_keys() {
    std::vector<std::string> out;
    for (const auto& [k, v] : registry()) out.push_back(k);
    return out;
}

FloorPlan build_floorplan(const Scenario& s) {
    if (s.four_room_preset) return FloorPlan::four_room(s.width_m, s.height_m);
    if (s.custom_rooms.empty()) throw ConfigError("floorplan has no rooms");
    return FloorPlan(s.custom_rooms);
}

PropagationParams build_propagation(const Scenario& s) {
    PropagationParams p;
    p.wall_loss_db_24 = s.wall_loss_db;
    if (!s.rate_table_24.empty()) p.rate_table_24 = s.rate_table_24;
    if (!s.rate_table_60.empty()) p.rate_table_60 = s.rate_table_60;
    return p;
}

MobilityTrace build_route(const DeviceConfig& d, double speed_fallback, std::uint64_t seed) {
    const double speed = d.route.speed_mps > 0 ? d.route.speed_mps : speed_fallback;
    switch (d.route.kind) {
        case RouteSpec::Kind::Stationary:
            return stationary_trace(d.position);
        case RouteSpec::Kind::Line:
            return line_trace(d.position, d.route.points.at(0), speed);
        case RouteSpec::Kind::LShape:
            return l_shape_trace(d.position, d.route.points.at(0), d.route.points.at(1), speed);
        case RouteSpec::Kind::Rectangle:
            return rectangle_loop_trace(d.route.points.at(0).x, d.route.points.at(0).y,
                                        d.route.points.at(1).x, d.route.points.at(1).y, speed);
        case RouteSpec::Kind::Waypoints: {
            std::vector<Waypoint> pts{{d.position, 0.0}};
            for (const auto& p : d.route.points) pts.push_back({p, 0.0});
            return MobilityTrace(std::move(pts), speed);
        }
        case RouteSpec::Kind::RandomWaypoint: {
            RngStream rng =
                RngStream::for_node(seed, static_cast<std::uint32_t>(d.id), RngPurpose::Placement);
            return random_waypoint_trace(d.route.points.at(0).x, d.route.points.at(0).y,
                                         d.route.points.at(1).x, d.route.points.at(1).y,
                                         d.route.random_waypoints, speed, rng);
        }
    }
    throw ConfigError("unhandled route kind");
}

namespace {

MacConfig build_mac_config(const Scenario& s) {
    MacConfig m;
    m.aifs_differentiation = s.aifs_differentiation;
    for (int c = 0; c < 2; ++c) {
        m.cw_min[c] = s.cw_min[c];
        m.cw_max[c] = s.cw_max[c];
        m.retry_limit[c] = s.retry_limit[c];
    }
    m.sifs_us = s.sifs_us;
    m.slot_us = s.slot_us;
    return m;
}

} // namespace

CogcellRunParams build_cogcell_params(const Scenario& s) {
    CogcellRunParams run;
    run.duration_s = s.duration_s;
    run.mac = build_mac_config(s);

    ControllerConfig& c = run.controller;
    c.plan = build_floorplan(s);
    c.wifi_ap_position = s.wifi_ap;
    c.picocell_positions.clear();
    if (s.picocells_auto) {
        for (const auto& room : c.plan.rooms()) c.picocell_positions.emplace_back(room.center());
    } else {
        c.picocell_positions.assign(c.plan.rooms().size(), std::nullopt);
        for (const auto& [room, pos] : s.picocells)
            c.picocell_positions[static_cast<std::size_t>(room)] = pos;
    }
    c.sectors = SectorConfig::from_beamwidth(s.mm_beamwidth_deg, SimTime::us(s.cbap_duration_us));
    c.prop = build_propagation(s);
    c.estimate_sigma_deg = s.estimate_sigma_deg >= 0.0
                               ? s.estimate_sigma_deg
                               : s.mm_beamwidth_deg * defaults::kEstimateSigmaSectorFraction;
    c.estimate_uncertainty = s.uncertainty_sectors;
    c.beam_mode = s.beam_mode;
    c.sensor_period = SimTime::us(s.sample_period_us);
    c.sensor_sigma_deg = s.sensor_sigma_deg;
    c.fallback = FallbackPolicy{SimTime::us(s.outage_threshold_us), SimTime::us(s.hysteresis_us)};
    c.blockage_start =
        s.blockage_start_s >= 0.0 ? SimTime::from_seconds(s.blockage_start_s) : SimTime::ns(-1);
    c.seed = s.seed;

    for (const auto& d : s.devices) {
        DeviceSpec spec;
        spec.id = d.id;
        spec.trace = build_route(d, defaults::kWalkSpeedMps, s.seed);
        spec.session_bytes = d.session_bytes;
        spec.session_start =
            d.session_start_s >= 0.0 ? SimTime::from_seconds(d.session_start_s) : SimTime::ns(-1);
        run.devices.push_back(std::move(spec));
    }
    return run;
}

MetricsRecord run_scenario(const Scenario& s, std::uint64_t seed, std::ostream* trace) {
    switch (s.experiment) {
        case ExperimentKind::Cogcell: {
            CogcellRunParams p = build_cogcell_params(s);
            p.trace = trace;
            MetricsRecord r = run_cogcell(p, seed);
            r.run_id = s.name;
            return r;
        }
        case ExperimentKind::AccessMix: {
            AccessMixParams p;
            p.n_req60 = s.stations_req60;
            p.n_wifi24 = s.stations_wifi24;
            p.duration_s = s.duration_s;
            p.mac = build_mac_config(s);
            p.poisson = !s.saturated;
            p.arrival_per_s = s.arrival_per_s;
            p.trace = trace;
            MetricsRecord r = run_access_mix(p, seed);
            r.run_id = s.name;
            return r;
        }
        case ExperimentKind::Bianchi: {
            SingleCategoryParams p;
            p.stations = s.stations_wifi24;
            p.cw_min = s.cw_min[1];
            p.cw_max = s.cw_max[1];
            p.retry_limit = s.retry_limit[1];
            p.duration_s = s.duration_s;
            MetricsRecord r = run_single_category(p, seed);
            r.run_id = s.name;
            return r;
        }
        case ExperimentKind::Discovery: {
            DiscoveryCmpParams p;
            p.devices = s.discovery_devices;
            p.beamwidth_deg = s.discovery_beamwidth_deg;
            p.estimate_sigma_deg = s.estimate_sigma_deg;
            p.mode = s.discovery_mode;
            p.base.uncertainty_sectors = s.uncertainty_sectors;
            MetricsRecord r = run_discovery_cmp(p, seed);
            r.run_id = s.name;
            return r;
        }
        case ExperimentKind::Rebeam: {
            RebeamCmpParams p;
            p.beamwidth_deg = s.track_beamwidth_deg;
            p.noise_sigma_deg = s.sensor_sigma_deg;
            p.sample_period = SimTime::us(s.sample_period_us);
            MetricsRecord r = run_rebeam_cmp(p, seed);
            r.run_id = s.name;
            return r;
        }
    }
    throw ConfigError("unhandled experiment kind");
}

std::vector<MetricsRecord> run_sweep(const Scenario& base, const SweepSpec& sweep) {
    if (sweep.values.empty()) throw ConfigError("sweep needs at least one value");
    if (sweep.seeds_per_point < 1) throw ConfigError("sweep needs at least one seed per point");
    {
        Scenario probe = base; // fails fast on a bad axis or value
        apply_override(probe, sweep.axis, sweep.values.front());
        validate_scenario(probe);
    }

    struct Task {
        std::size_t point;
        int rep;
    };
    std::vector<Task> tasks;
    for (std::size_t point = 0; point < sweep.values.size(); ++point)
        for (int rep = 0; rep < sweep.seeds_per_point; ++rep) tasks.push_back({point, rep});

    std::vector<MetricsRecord> rows(tasks.size());
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                const Task t = tasks[i];
                Scenario s = base;
                apply_override(s, sweep.axis, sweep.values[t.point]);
                const std::uint64_t seed =
                    base.seed + static_cast<std::uint64_t>(t.point) * sweep.seed_stride +
                    static_cast<std::uint64_t>(t.rep);
                MetricsRecord r = run_scenario(s, seed);
                r.run_id = base.name + "_" + sweep.axis + "=" + sweep.values[t.point];
                rows[i] = std::move(r);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };

    const unsigned hw = std::thread::hardware_concurrency();
    const std::size_t n_threads = std::max<std::size_t>(1, std::min<std::size_t>(hw ? hw : 1, tasks.size()));
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return rows;
}

} // namespace cogsim
