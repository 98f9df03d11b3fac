#include <scorecast/tournament.hpp>

#include <nlohmann/json.hpp>

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace scorecast {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) fields.push_back(trim(field));
    if (!line.empty() && line.back() == sep) fields.emplace_back();
    return fields;
}

bool parse_long(const std::string& s, long& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

bool parse_double(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

void expect_header(std::istream& in, const std::string& expected, const std::string& source) {
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error(source + ": empty input, expected header '" + expected + "'");
    if (trim(line) != expected)
        throw std::runtime_error(source + ": bad header '" + trim(line) + "', expected '" +
                                 expected + "'");
}

struct EventSink {
    std::vector<EventRecord> events;
    std::map<std::string, std::size_t> index;

    bool add(EventRecord event, std::vector<ValidationIssue>& issues, const std::string& source,
             long line) {
        if (index.count(event.event_id)) {
            issues.push_back({source, line, "duplicate event id '" + event.event_id + "'"});
            return false;
        }
        index[event.event_id] = events.size();
        events.push_back(std::move(event));
        return true;
    }
};

struct SubmissionSink {
    std::vector<ForecastSubmission> submissions;
    std::set<std::pair<std::string, std::string>> seen;

    bool add(const EventSink& events, const std::string& forecaster_id,
             const std::string& event_id, std::vector<double> probs,
             std::vector<ValidationIssue>& issues, const std::string& source, long line) {
        const auto it = events.index.find(event_id);
        if (it == events.index.end()) {
            issues.push_back({source, line, "unknown event '" + event_id + "'"});
            return false;
        }
        const EventRecord& event = events.events[it->second];
        if (static_cast<Eigen::Index>(probs.size()) != event.categories) {
            issues.push_back({source, line,
                              "expected " + std::to_string(event.categories) +
                                  " probabilities for event '" + event_id + "', got " +
                                  std::to_string(probs.size())});
            return false;
        }
        if (!seen.insert({forecaster_id, event_id}).second) {
            issues.push_back({source, line,
                              "duplicate submission by '" + forecaster_id + "' for event '" +
                                  event_id + "'"});
            return false;
        }
        try {
            ForecastSubmission sub{forecaster_id, event_id,
                                   Forecast(Eigen::Map<const Eigen::VectorXd>(
                                                probs.data(),
                                                static_cast<Eigen::Index>(probs.size()))
                                                .eval()),
                                   event.round};
            submissions.push_back(std::move(sub));
            return true;
        } catch (const std::invalid_argument& err) {
            seen.erase({forecaster_id, event_id});
            issues.push_back({source, line, err.what()});
            return false;
        }
    }
};

void parse_event_row(const std::vector<std::string>& fields, EventSink& sink,
                     std::vector<ValidationIssue>& issues, long line) {
    if (fields.size() != 4) {
        issues.push_back({"events", line,
                          "expected 4 fields (event_id,round,k,outcome), got " +
                              std::to_string(fields.size())});
        return;
    }
    EventRecord event;
    event.event_id = fields[0];
    if (event.event_id.empty()) {
        issues.push_back({"events", line, "empty event id"});
        return;
    }
    long round = 0;
    if (!parse_long(fields[1], round)) {
        issues.push_back({"events", line, "bad round '" + fields[1] + "'"});
        return;
    }
    event.round = static_cast<int>(round);
    long k = 0;
    if (!parse_long(fields[2], k) || k < 2) {
        issues.push_back({"events", line, "bad category count '" + fields[2] + "'"});
        return;
    }
    event.categories = static_cast<Eigen::Index>(k);
    if (!fields[3].empty()) {
        long outcome = 0;
        if (!parse_long(fields[3], outcome) || outcome < 0 || outcome >= k) {
            issues.push_back({"events", line,
                              "outcome '" + fields[3] + "' outside [0," + std::to_string(k) +
                                  ") for event '" + event.event_id + "'"});
            return;
        }
        event.outcome = static_cast<Eigen::Index>(outcome);
    }
    sink.add(std::move(event), issues, "events", line);
}

void parse_forecast_row(const std::vector<std::string>& fields, const EventSink& events,
                        SubmissionSink& sink, std::vector<ValidationIssue>& issues, long line) {
    if (fields.size() != 3) {
        issues.push_back({"forecasts", line,
                          "expected 3 fields (forecaster_id,event_id,probs), got " +
                              std::to_string(fields.size())});
        return;
    }
    if (fields[0].empty()) {
        issues.push_back({"forecasts", line, "empty forecaster id"});
        return;
    }
    std::vector<double> probs;
    for (const auto& token : split(fields[2], ';')) {
        double v = 0.0;
        if (!parse_double(token, v)) {
            issues.push_back({"forecasts", line, "bad probability '" + token + "'"});
            return;
        }
        probs.push_back(v);
    }
    sink.add(events, fields[0], fields[1], std::move(probs), issues, "forecasts", line);
}

}  // namespace

IngestResult ingest_csv(std::istream& events_in, std::istream& forecasts_in) {
    IngestResult result;
    EventSink events;
    SubmissionSink submissions;

    expect_header(events_in, "event_id,round,k,outcome", "events");
    std::string line;
    long line_no = 1;
    while (std::getline(events_in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        parse_event_row(split(line, ','), events, result.issues, line_no);
    }

    expect_header(forecasts_in, "forecaster_id,event_id,probs", "forecasts");
    line_no = 1;
    while (std::getline(forecasts_in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        parse_forecast_row(split(line, ','), events, submissions, result.issues, line_no);
    }

    result.events = std::move(events.events);
    result.submissions = std::move(submissions.submissions);
    return result;
}

IngestResult ingest_csv_files(const std::string& events_path,
                              const std::string& forecasts_path) {
    std::ifstream events_in(events_path);
    if (!events_in) throw std::runtime_error("cannot open events file: " + events_path);
    std::ifstream forecasts_in(forecasts_path);
    if (!forecasts_in) throw std::runtime_error("cannot open forecasts file: " + forecasts_path);
    return ingest_csv(events_in, forecasts_in);
}

IngestResult ingest_jsonl(std::istream& in) {
    using nlohmann::json;
    IngestResult result;
    EventSink events;
    SubmissionSink submissions;

    struct PendingForecast {
        json object;
        long line;
    };
    std::vector<PendingForecast> pending;

    std::string line;
    long line_no = 0;
    bool saw_record = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        saw_record = true;
        json object = json::parse(line, nullptr, false);
        if (object.is_discarded() || !object.is_object()) {
            result.issues.push_back({"records", line_no, "not a JSON object"});
            continue;
        }
        if (object.contains("forecaster_id")) {
            pending.push_back({std::move(object), line_no});
            continue;
        }
        if (!object.contains("event_id") || !object.contains("k") || !object.contains("round")) {
            result.issues.push_back(
                {"records", line_no, "object is neither an event (event_id/round/k) nor a "
                                     "forecast (forecaster_id/event_id/probs)"});
            continue;
        }
        try {
            EventRecord event;
            event.event_id = object.at("event_id").get<std::string>();
            event.round = object.at("round").get<int>();
            event.categories = object.at("k").get<Eigen::Index>();
            if (event.categories < 2) {
                result.issues.push_back({"records", line_no, "bad category count"});
                continue;
            }
            if (object.contains("outcome") && !object.at("outcome").is_null()) {
                const auto outcome = object.at("outcome").get<long>();
                if (outcome < 0 || outcome >= event.categories) {
                    result.issues.push_back({"records", line_no, "outcome outside [0,k)"});
                    continue;
                }
                event.outcome = static_cast<Eigen::Index>(outcome);
            }
            events.add(std::move(event), result.issues, "records", line_no);
        } catch (const json::exception& err) {
            result.issues.push_back({"records", line_no, err.what()});
        }
    }
    if (!saw_record) throw std::runtime_error("records: empty input");

    for (auto& entry : pending) {
        try {
            const auto forecaster_id = entry.object.at("forecaster_id").get<std::string>();
            const auto event_id = entry.object.at("event_id").get<std::string>();
            auto probs = entry.object.at("probs").get<std::vector<double>>();
            if (forecaster_id.empty()) {
                result.issues.push_back({"records", entry.line, "empty forecaster id"});
                continue;
            }
            submissions.add(events, forecaster_id, event_id, std::move(probs), result.issues,
                            "records", entry.line);
        } catch (const json::exception& err) {
            result.issues.push_back({"records", entry.line, err.what()});
        }
    }

    result.events = std::move(events.events);
    result.submissions = std::move(submissions.submissions);
    return result;
}

IngestResult ingest_jsonl_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open records file: " + path);
    return ingest_jsonl(in);
}

}  // namespace scorecast
