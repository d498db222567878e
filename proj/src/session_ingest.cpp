#include "gazekit/session_ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <sstream>

#include "gazekit/digest.hpp"
#include "json.hpp"

namespace gazekit {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string fold(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == ' ' || c == '\t' || c == '-' || c == '_') continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == delim) {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

// Full-consume numeric parse; accepts scientific notation (1.702E+12).
std::optional<double> parse_number(const std::string& raw) {
    std::string s = trim(raw);
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) return std::nullopt;
    return v;
}

struct ColumnMap {
    int timestamp = -1, x = -1, y = -1, message = -1;
    int obj_x = -1, obj_y = -1, obj_z = -1, kind = -1, object = -1;
};

ColumnMap map_header(const std::vector<std::string>& fields) {
    ColumnMap cols;
    for (int i = 0; i < static_cast<int>(fields.size()); ++i) {
        std::string key = fold(fields[i]);
        if (key == "timestamp") cols.timestamp = i;
        else if (key == "x") cols.x = i;
        else if (key == "y") cols.y = i;
        else if (key == "message") cols.message = i;
        else if (key == "objx") cols.obj_x = i;
        else if (key == "objy") cols.obj_y = i;
        else if (key == "objz") cols.obj_z = i;
        else if (key == "kind") cols.kind = i;
        else if (key == "object") cols.object = i;
    }
    if (cols.timestamp < 0 || cols.x < 0 || cols.y < 0)
        throw MalformedHeader("header must name Timestamp, X and Y columns");
    return cols;
}

std::string field_at(const std::vector<std::string>& fields, int idx) {
    if (idx < 0 || idx >= static_cast<int>(fields.size())) return "";
    return trim(fields[idx]);
}

// "Q3-In AoI-Mushroom" -> "Mushroom"; the "No Stimuli" suffix means no
// stimulus name is carried.
std::string stimulus_name_from_message(const std::string& message) {
    auto pos = message.rfind('-');
    if (pos == std::string::npos) return "";
    std::string name = trim(message.substr(pos + 1));
    if (fold(name) == "nostimuli") return "";
    return name;
}

}  // namespace

ParsedSession parse_session(std::istream& raw_log, const FormatOptions& options) {
    std::string line;
    if (!std::getline(raw_log, line)) throw EmptySession("empty input stream");
    ColumnMap cols = map_header(split(line, options.delimiter));

    ParsedSession out;
    SessionLog& session = out.session;
    session.screen_width = options.screen_width;
    session.screen_height = options.screen_height;
    ParseLedger& ledger = out.ledger;
    bool has_message_col = cols.message >= 0;

    // Events ride on sample rows; carry each event with its row index so
    // the stable sort below keeps them aligned.
    struct Row {
        GazeSample sample;
        std::string message;
        std::optional<StimulusEvent> event;
    };
    std::vector<Row> rows;

    while (std::getline(raw_log, line)) {
        if (trim(line).empty()) continue;
        ++ledger.total_rows;
        auto fields = split(line, options.delimiter);

        auto ts = parse_number(field_at(fields, cols.timestamp));
        std::string raw_x = field_at(fields, cols.x);
        std::string raw_y = field_at(fields, cols.y);
        auto x = parse_number(raw_x);
        auto y = parse_number(raw_y);
        if (!ts || (!x && !raw_x.empty()) || (!y && !raw_y.empty())) {
            ++ledger.rejected_rows;  // skip-and-count, never abort
            continue;
        }

        Row row;
        row.sample.timestamp_ms = *ts;
        if (x && y) {
            row.sample.x = *x;
            row.sample.y = *y;
            row.sample.valid = true;
            double cx = std::clamp(row.sample.x, 0.0, static_cast<double>(options.screen_width));
            double cy = std::clamp(row.sample.y, 0.0, static_cast<double>(options.screen_height));
            if (cx != row.sample.x || cy != row.sample.y) {
                row.sample.x = cx;
                row.sample.y = cy;
                row.sample.off_screen = true;
                ++ledger.clamped_samples;
            }
        } else {
            // Empty coordinate pair marks tracking loss.
            row.sample.valid = false;
            ++ledger.invalid_samples;
        }
        row.message = field_at(fields, cols.message);

        auto ox = parse_number(field_at(fields, cols.obj_x));
        auto oy = parse_number(field_at(fields, cols.obj_y));
        if (ox && oy) {
            StimulusEvent ev;
            ev.timestamp_ms = *ts;
            ev.obj_x = *ox;
            ev.obj_y = *oy;
            ev.obj_z = parse_number(field_at(fields, cols.obj_z)).value_or(0.0);
            std::string kind = fold(field_at(fields, cols.kind));
            ev.kind = (kind == "disappear") ? EventKind::Disappear : EventKind::Appear;
            std::string object = field_at(fields, cols.object);
            if (object.empty()) object = stimulus_name_from_message(row.message);
            ev.object_id = object.empty() ? options.default_object_id : object;
            row.event = ev;
        }
        ++ledger.accepted_rows;
        rows.push_back(std::move(row));
    }

    if (rows.empty()) throw EmptySession("no usable rows in session log");

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.sample.timestamp_ms < b.sample.timestamp_ms; });

    bool any_message = false;
    for (auto& row : rows) {
        session.samples.push_back(row.sample);
        if (row.event) session.events.push_back(*row.event);
        if (!row.message.empty()) any_message = true;
    }
    if (has_message_col && any_message)
        for (auto& row : rows) session.source_messages.push_back(row.message);
    return out;
}

std::string serialize_session(const SessionLog& session, const FormatOptions& options) {
    const char d = options.delimiter;
    std::ostringstream out;
    out.precision(15);
    bool with_message = !session.source_messages.empty();
    out << "Timestamp" << d << "X" << d << "Y";
    if (with_message) out << d << "Message";
    out << d << "Obj-X" << d << "Obj-Y" << d << "Obj-Z" << d << "Kind" << d << "Object" << "\n";

    std::size_t ev = 0;
    auto skip_synthetic = [&](std::size_t i) {
        return i < session.events.size() && session.events[i].synthetic;
    };
    for (std::size_t i = 0; i < session.samples.size(); ++i) {
        const GazeSample& s = session.samples[i];
        out << s.timestamp_ms << d;
        if (s.valid)
            out << s.x << d << s.y;
        else
            out << d;
        if (with_message) out << d << session.source_messages[i];
        while (skip_synthetic(ev)) ++ev;  // synthetic events are derived, not serialized
        if (ev < session.events.size() && session.events[ev].timestamp_ms == s.timestamp_ms) {
            const StimulusEvent& e = session.events[ev++];
            out << d << e.obj_x << d << e.obj_y << d << e.obj_z << d << to_string(e.kind) << d
                << e.object_id;
        } else {
            out << d << d << d << d << d;
        }
        out << "\n";
    }
    return out.str();
}

std::string pseudonymize(const std::string& raw_id, const std::string& salt) {
    if (salt.size() < 16) throw SaltTooShort("pseudonymization salt must be at least 16 bytes");
    // Domain-separated digest: salt length prefix keeps (salt, id)
    // boundaries unambiguous.
    std::string material = std::to_string(salt.size()) + ":" + salt + ":" + raw_id;
    return sha256_hex(material);
}

std::vector<StimulusEvent> derive_disappearances(const std::vector<StimulusEvent>& events,
                                                 double visibility_timeout_ms,
                                                 double session_end_ms) {
    std::vector<StimulusEvent> out;
    out.reserve(events.size() * 2);
    for (std::size_t i = 0; i < events.size(); ++i) {
        out.push_back(events[i]);
        if (events[i].kind != EventKind::Appear) continue;
        // Bounded by timeout, the same object's next Appear, and session end.
        double end = std::min(events[i].timestamp_ms + visibility_timeout_ms, session_end_ms);
        bool has_explicit = false;
        for (std::size_t j = i + 1; j < events.size(); ++j) {
            if (events[j].object_id != events[i].object_id) continue;
            if (events[j].kind == EventKind::Disappear) has_explicit = true;
            else end = std::min(end, events[j].timestamp_ms);
            break;
        }
        if (has_explicit) continue;
        StimulusEvent dis = events[i];
        dis.kind = EventKind::Disappear;
        dis.timestamp_ms = std::max(end, events[i].timestamp_ms);
        dis.synthetic = true;
        out.push_back(dis);
    }
    std::stable_sort(out.begin(), out.end(), [](const StimulusEvent& a, const StimulusEvent& b) {
        return a.timestamp_ms < b.timestamp_ms;
    });
    return out;
}

AoiConfig parse_aoi_config(std::istream& in) {
    nlohmann::json doc = nlohmann::json::parse(in);
    AoiConfig config;
    for (const auto& item : doc) {
        AoiDefinition aoi;
        aoi.aoi_id = item.at("aoi_id").get<std::string>();
        aoi.x = item.at("x").get<double>();
        aoi.y = item.at("y").get<double>();
        aoi.width = item.at("width").get<double>();
        aoi.height = item.at("height").get<double>();
        if (aoi.width <= 0 || aoi.height <= 0)
            throw ParseError("AoI '" + aoi.aoi_id + "' must have positive width and height");
        if (config.find(aoi.aoi_id))
            throw ParseError("duplicate aoi_id '" + aoi.aoi_id + "'");
        auto role = aoi_role_from_string(item.value("role", "Neutral"));
        if (!role) throw ParseError("unknown AoI role for '" + aoi.aoi_id + "'");
        aoi.role = *role;
        config.aois.push_back(std::move(aoi));
    }
    return config;
}

std::string serialize_aoi_config(const AoiConfig& config) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& a : config.aois) {
        doc.push_back({{"aoi_id", a.aoi_id},
                       {"x", a.x},
                       {"y", a.y},
                       {"width", a.width},
                       {"height", a.height},
                       {"role", to_string(a.role)}});
    }
    return doc.dump(2);
}

SessionMeta parse_session_meta(std::istream& in) {
    nlohmann::json doc = nlohmann::json::parse(in);
    SessionMeta meta;
    meta.participant_id = doc.at("participant_id").get<std::string>();
    meta.screen_width = doc.value("screen_width", 1920);
    meta.screen_height = doc.value("screen_height", 1080);
    return meta;
}

const char* to_string(Quadrant q) {
    switch (q) {
        case Quadrant::Q1: return "Q1";
        case Quadrant::Q2: return "Q2";
        case Quadrant::Q3: return "Q3";
        case Quadrant::Q4: return "Q4";
    }
    return "?";
}

const char* to_string(EventKind k) {
    return k == EventKind::Appear ? "Appear" : "Disappear";
}

const char* to_string(StimulusRole r) {
    return r == StimulusRole::Target ? "Target" : "Distractor";
}

const char* to_string(AoiRole r) {
    switch (r) {
        case AoiRole::Target: return "Target";
        case AoiRole::Distractor: return "Distractor";
        case AoiRole::Neutral: return "Neutral";
    }
    return "?";
}

std::optional<AoiRole> aoi_role_from_string(const std::string& s) {
    std::string f = fold(s);
    if (f == "target") return AoiRole::Target;
    if (f == "distractor") return AoiRole::Distractor;
    if (f == "neutral") return AoiRole::Neutral;
    return std::nullopt;
}

}  // namespace gazekit
