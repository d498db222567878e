/**
 * session_ingest.hpp — Raw log parsing, pseudonymization, and event
 * completion.
 *
 * Input is delimiter-separated UTF-8 text with a header row naming at
 * least Timestamp, X, Y; optional Message, Obj-X, Obj-Y, Obj-Z and Kind
 * columns. Rows with a populated Obj-X/Obj-Y pair produce an Appear
 * event at that row's timestamp. Malformed rows are skipped and
 * counted, never fatal for the session.
 */

#pragma once

#include <istream>
#include <stdexcept>
#include <string>

#include "gazekit/types.hpp"

namespace gazekit {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MalformedHeader : ParseError {
    using ParseError::ParseError;
};
struct EmptySession : ParseError {
    using ParseError::ParseError;
};
struct SaltTooShort : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FormatOptions {
    char delimiter = ',';
    int screen_width = 1920;
    int screen_height = 1080;
    // Object id used for Appear rows whose Message does not name a
    // stimulus.
    std::string default_object_id = "stimulus";
};

/// Row accounting: total = accepted + rejected always holds.
struct ParseLedger {
    std::size_t total_rows = 0;     // data rows seen (header excluded)
    std::size_t accepted_rows = 0;  // rows that produced a sample
    std::size_t rejected_rows = 0;  // malformed rows skipped
    std::size_t clamped_samples = 0;
    std::size_t invalid_samples = 0;  // tracking-loss rows (empty X/Y)
};

struct ParsedSession {
    SessionLog session;
    ParseLedger ledger;
};

/// Parse a raw session log stream. Samples come out stably sorted by
/// timestamp; out-of-bounds gaze is clamped to the screen edge and
/// flagged. Throws MalformedHeader / EmptySession.
ParsedSession parse_session(std::istream& raw_log, const FormatOptions& options = {});

/// Serialize back to the same CSV dialect parse_session reads.
/// parse(serialize(s)) == s field-for-field for valid sessions.
std::string serialize_session(const SessionLog& session, const FormatOptions& options = {});

/// One-way salted digest of a participant identifier, rendered as a
/// fixed-length hex token. Throws SaltTooShort when salt < 16 bytes.
std::string pseudonymize(const std::string& raw_id, const std::string& salt);

/// Insert a synthetic Disappear for every Appear that lacks an explicit
/// one, at min(appear + timeout, next Appear of the same object,
/// session end). Input must be time-sorted.
std::vector<StimulusEvent> derive_disappearances(const std::vector<StimulusEvent>& events,
                                                 double visibility_timeout_ms,
                                                 double session_end_ms);

/// Load an AoI config from its JSON document (array of rectangles).
AoiConfig parse_aoi_config(std::istream& in);
std::string serialize_aoi_config(const AoiConfig& config);

struct SessionMeta {
    std::string participant_id;
    int screen_width = 1920;
    int screen_height = 1080;
};

SessionMeta parse_session_meta(std::istream& in);

}  // namespace gazekit
