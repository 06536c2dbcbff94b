// Copyright 2026 The bwtx Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// HTTP/JSON front end. Sessions live in memory; export/import use the .bwtx container.

#include <httplib.h>

#include <charconv>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <nlohmann/json.hpp>
#include <random>
#include <shared_mutex>
#include <string>
#include <vector>

#include "bwtx/bwtx.hpp"
#include "bwtx/json_io.hpp"

namespace bwtx {

inline constexpr int kDefaultPort = 8374;

struct ServiceOptions {
    std::size_t max_text_bytes = std::size_t{64} << 20;
    index_t max_window = 1024;
    PresetTables tables;
};

class Service {
public:
    explicit Service(ServiceOptions options = {}) : options_(std::move(options)) {
        server_.set_payload_max_length(options_.max_text_bytes * 4 + (1 << 20));
        // The library default is SO_REUSEPORT, which lets a second server share a busy port.
        server_.set_socket_options([](socket_t sock) {
            int yes = 1;
            setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
        });
        routes();
    }

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    httplib::Server& server() noexcept { return server_; }

    /// Binds without serving. Port 0 picks a free port. Returns the bound port or -1.
    int bind(const std::string& host, int port) {
        if (port == 0) return server_.bind_to_any_port(host);
        return server_.bind_to_port(host, port) ? port : -1;
    }

    /// Blocks until stop().
    bool listen_after_bind() { return server_.listen_after_bind(); }
    void stop() { server_.stop(); }
    void wait_until_ready() const { server_.wait_until_ready(); }

    std::size_t session_count() const {
        std::shared_lock lock(sessions_mutex_);
        return sessions_.size();
    }

private:
    using json = nlohmann::json;

    struct Handle {
        mutable std::shared_mutex mutex;
        Session session;
        std::uint64_t next_id = 0;

        const SessionTransform* find(const std::string& tid) const {
            for (const auto& t : session.transforms) {
                if (t.id == tid) return &t;
            }
            return nullptr;
        }
        SessionTransform* find(const std::string& tid) {
            return const_cast<SessionTransform*>(std::as_const(*this).find(tid));
        }
        std::string fresh_id() {
            while (true) {
                std::string id = "t" + std::to_string(next_id++);
                if (!find(id)) return id;
            }
        }
    };

    // Errors that are not library errors.
    struct HttpError {
        int status;
        std::string code;
        std::string message;
    };

    static int status_for(ErrorCode code) {
        switch (code) {
            case ErrorCode::EmptyText: return 400;
            case ErrorCode::TextTooLarge: return 413;
            case ErrorCode::OutOfBounds: return 416;
            case ErrorCode::CycleDetected: return 409;
            case ErrorCode::WriteFailure: return 500;
            default: return 422;
        }
    }

    static void send_json(httplib::Response& res, const json& body, int status = 200) {
        res.status = status;
        res.set_content(body.dump(), "application/json");
    }

    static void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message) {
        send_json(res, {{"code", code}, {"message", message}}, status);
    }

    template <typename F>
    static httplib::Server::Handler guarded(F&& f) {
        return [f = std::forward<F>(f)](const httplib::Request& req, httplib::Response& res) {
            try {
                f(req, res);
            } catch (const HttpError& e) {
                send_error(res, e.status, e.code, e.message);
            } catch (const Error& e) {
                send_error(res, status_for(e.code()), to_string(e.code()), e.detail());
            } catch (const json::exception& e) {
                send_error(res, 400, "MalformedRequest", e.what());
            } catch (const std::exception& e) {
                send_error(res, 500, "Internal", e.what());
            }
        };
    }

    static json body_json(const httplib::Request& req) {
        if (req.body.empty()) return json::object();
        json j = json::parse(req.body);
        if (!j.is_object()) throw HttpError{400, "MalformedRequest", "request body must be a JSON object"};
        return j;
    }

    static std::optional<std::uint64_t> query_uint(const httplib::Request& req, const std::string& key) {
        if (!req.has_param(key)) return std::nullopt;
        const std::string v = req.get_param_value(key);
        std::uint64_t out = 0;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || ptr != v.data() + v.size()) {
            throw HttpError{400, "MalformedRequest", "parameter '" + key + "' must be a non-negative integer"};
        }
        return out;
    }

    static index_t to_index(std::uint64_t v) {
        return v > std::numeric_limits<index_t>::max() ? std::numeric_limits<index_t>::max() : static_cast<index_t>(v);
    }

    /// An int 0..255, a single-character string, or a \xNN escape.
    static std::uint8_t byte_from_json(const json& j) {
        if (j.is_number_integer()) {
            const auto v = j.get<std::int64_t>();
            if (v >= 0 && v <= 255) return static_cast<std::uint8_t>(v);
        } else if (j.is_string()) {
            const Bytes b = parse_ordering_bytes(j.get<std::string>());
            if (b.size() == 1) return b[0];
        }
        throw HttpError{400, "MalformedRequest", "expected a byte, got " + j.dump()};
    }

    std::shared_ptr<Handle> handle(const httplib::Request& req) const {
        const std::string& id = req.path_params.at("id");
        std::shared_lock lock(sessions_mutex_);
        auto it = sessions_.find(id);
        if (it == sessions_.end()) throw HttpError{404, "NotFound", "no session '" + id + "'"};
        return it->second;
    }

    static std::shared_ptr<const Transform> built(const Handle& h, const httplib::Request& req) {
        const std::string& tid = req.path_params.at("tid");
        std::shared_lock lock(h.mutex);
        const SessionTransform* t = h.find(tid);
        if (!t) throw HttpError{404, "NotFound", "no transform '" + tid + "'"};
        return t->built;
    }

    std::string register_session(Session session) {
        auto h = std::make_shared<Handle>();
        h->session = std::move(session);
        h->next_id = h->session.transforms.size();
        std::unique_lock lock(sessions_mutex_);
        std::string id;
        do {
            id = random_token();
        } while (sessions_.count(id));
        sessions_.emplace(id, std::move(h));
        return id;
    }

    std::string random_token() {
        static constexpr char kHex[] = "0123456789abcdef";
        std::lock_guard lock(rng_mutex_);
        std::string out(16, '0');
        std::uint64_t v = rng_();
        for (char& c : out) {
            c = kHex[v & 0xf];
            v >>= 4;
        }
        return out;
    }

    static json transform_summary(const SessionTransform& t) {
        return {{"transform_id", t.id},
                {"name", t.name},
                {"ordering", json_io::ordering(t.ordering)},
                {"stats", json_io::stats(t.built->stats())},
                {"highlights", t.highlights}};
    }

    json session_summary(const std::string& id, const Handle& h) const {
        std::shared_lock lock(h.mutex);
        const TextBuffer& text = *h.session.text;
        json alphabet = json::array();
        for (std::uint8_t b : text.alphabet()) {
            alphabet.push_back({{"byte", b}, {"char", escape_byte(b)}, {"count", text.counts()[b]}});
        }
        json transforms = json::array();
        for (const auto& t : h.session.transforms) transforms.push_back(transform_summary(t));
        return {{"session_id", id},
                {"end_marker", escape_byte(text.end_marker())},
                {"end_marker_byte", text.end_marker()},
                {"alphabet", alphabet},
                {"size", text.size()},
                {"window", {{"rows", h.session.window_rows}, {"cols", h.session.window_cols}}},
                {"transforms", transforms}};
    }

    AlphabetOrdering ordering_from_request(const json& body, const TextBuffer& text) const {
        if (body.contains("order")) {
            Bytes order;
            for (const auto& b : body.at("order")) order.push_back(byte_from_json(b));
            return AlphabetOrdering("custom", std::move(order), text);
        }
        if (body.contains("preset")) return preset_ordering(parse_preset(body.at("preset").get<std::string>()), text, options_.tables);
        if (body.contains("ordering")) return resolve_ordering(body.at("ordering").get<std::string>(), text, options_.tables);
        throw HttpError{400, "MalformedRequest", "give one of 'ordering', 'preset' or 'order'"};
    }

    void routes() {
        server_.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
            if (req.body.empty()) throw Error(ErrorCode::EmptyText, "request body is empty");
            if (req.body.size() > options_.max_text_bytes) {
                throw Error(ErrorCode::TextTooLarge, "text exceeds " + std::to_string(options_.max_text_bytes) + " bytes");
            }
            Session s;
            s.text = std::make_shared<const TextBuffer>(to_bytes(req.body));
            const std::string id = register_session(std::move(s));
            send_json(res, session_summary(id, *handle_by_id(id)), 201);
        }));

        server_.Post("/sessions/import", guarded([this](const httplib::Request& req, httplib::Response& res) {
            LoadedSession loaded = load_session(as_bytes(req.body));
            json warnings = loaded.warnings;
            const std::string id = register_session(std::move(loaded.session));
            json body = session_summary(id, *handle_by_id(id));
            body["warnings"] = warnings;
            body["from_cache"] = loaded.from_cache;
            body["rebuilt"] = loaded.rebuilt;
            send_json(res, body, 201);
        }));

        server_.Get("/sessions/:id", guarded([this](const httplib::Request& req, httplib::Response& res) {
            send_json(res, session_summary(req.path_params.at("id"), *handle(req)));
        }));

        server_.Post("/sessions/:id/transforms", guarded([this](const httplib::Request& req, httplib::Response& res) {
            auto h = handle(req);
            const json body = body_json(req);
            std::shared_ptr<const TextBuffer> text;
            {
                std::shared_lock lock(h->mutex);
                text = h->session.text;
            }
            AlphabetOrdering ordering = ordering_from_request(body, *text);
            if (body.contains("name")) ordering.set_name(body.at("name").get<std::string>());
            auto t = std::make_shared<const Transform>(build_transform(text, ordering));

            std::unique_lock lock(h->mutex);
            SessionTransform entry{h->fresh_id(), ordering.name(), ordering, {}, t};
            json out = transform_summary(entry);
            h->session.transforms.push_back(std::move(entry));
            send_json(res, out, 201);
        }));

        server_.Get("/sessions/:id/transforms/:tid/window", guarded([this](const httplib::Request& req, httplib::Response& res) {
            auto h = handle(req);
            auto t = built(*h, req);
            WindowSpec spec;
            {
                std::shared_lock lock(h->mutex);
                spec.height = h->session.window_rows;
                spec.width = h->session.window_cols;
            }
            spec.top_row = to_index(query_uint(req, "top_row").value_or(0));
            spec.left_col = to_index(query_uint(req, "left_col").value_or(0));
            spec.height = to_index(query_uint(req, "height").value_or(spec.height));
            spec.width = to_index(query_uint(req, "width").value_or(spec.width));
            if (spec.height > options_.max_window || spec.width > options_.max_window) {
                throw Error(ErrorCode::OutOfBounds, "window larger than " + std::to_string(options_.max_window) + " in a dimension");
            }
            send_json(res, json_io::window(window(*t, spec)));
        }));

        server_.Get("/sessions/:id/transforms/:tid/search", guarded([this](const httplib::Request& req, httplib::Response& res) {
            auto h = handle(req);
            auto t = built(*h, req);
            Bytes pattern;
            if (req.has_param("pattern_b64")) {
                pattern = base64::decode(req.get_param_value("pattern_b64"));
            } else {
                pattern = to_bytes(req.get_param_value("pattern"));
            }
            const std::string dir = req.has_param("direction") ? req.get_param_value("direction") : "forward";
            if (dir != "forward" && dir != "backward") {
                throw HttpError{400, "MalformedRequest", "direction must be forward or backward"};
            }
            const Direction direction = dir == "forward" ? Direction::forward : Direction::backward;
            const RowInterval hits = prefix_search(*t, pattern);
            json row = nullptr;
            if (auto from = query_uint(req, "from_row")) {
                if (auto r = find_match(*t, pattern, to_index(*from), direction)) row = *r;
            } else if (!hits.empty()) {
                row = direction == Direction::forward ? hits.lo : hits.hi - 1;
            }
            send_json(res, {{"row", row}, {"interval", json_io::interval(hits)}});
        }));

        server_.Post("/sessions/:id/transforms/:tid/highlights", guarded([this](const httplib::Request& req, httplib::Response& res) {
            auto h = handle(req);
            const json body = body_json(req);
            const index_t row = body.at("row").get<index_t>();
            const bool on = body.value("on", true);
            std::unique_lock lock(h->mutex);
            SessionTransform* t = h->find(req.path_params.at("tid"));
            if (!t) throw HttpError{404, "NotFound", "no transform '" + req.path_params.at("tid") + "'"};
            if (row >= t->built->size()) throw Error(ErrorCode::OutOfBounds, "row " + std::to_string(row) + " is outside the matrix");
            set_highlight(*t, row, on);
            send_json(res, {{"transform_id", t->id}, {"highlights", t->highlights}});
        }));

        server_.Post("/sessions/:id/transforms/:tid/propagate", guarded([this](const httplib::Request& req, httplib::Response& res) {
            auto h = handle(req);
            const json body = body_json(req);
            const index_t row = body.at("row").get<index_t>();
            std::unique_lock lock(h->mutex);
            const SessionTransform* src = h->find(req.path_params.at("tid"));
            if (!src) throw HttpError{404, "NotFound", "no transform '" + req.path_params.at("tid") + "'"};
            const auto source = src->built;
            json rows = json::object();
            std::vector<index_t> targets;
            for (const auto& t : h->session.transforms) targets.push_back(locate_row(*source, row, *t.built));
            for (std::size_t i = 0; i < targets.size(); ++i) {
                set_highlight(h->session.transforms[i], targets[i], true);
                rows[h->session.transforms[i].id] = targets[i];
            }
            send_json(res, {{"rows", rows}});
        }));

        server_.Get("/sessions/:id/transforms/:tid/analysis", guarded([this](const httplib::Request& req, httplib::Response& res) {
            auto h = handle(req);
            auto t = built(*h, req);
            const std::string kind_name = req.get_param_value("kind");
            const auto kind = json_io::find_analysis_kind(kind_name);
            if (!kind) throw HttpError{400, "MalformedRequest", "unknown analysis kind '" + kind_name + "'"};
            const std::size_t max_gap = query_uint(req, "max_gap").value_or(kDefaultMaxGap);
            std::optional<std::size_t> section;
            if (auto s = query_uint(req, "section")) section = *s;
            send_json(res, json_io::analysis(*t, *kind, max_gap, section));
        }));

        server_.Post("/sessions/:id/orderings/propose", guarded([this](const httplib::Request& req, httplib::Response& res) {
            auto h = handle(req);
            const json body = body_json(req);
            std::shared_ptr<const TextBuffer> text;
            std::optional<AlphabetOrdering> base;
            {
                std::shared_lock lock(h->mutex);
                text = h->session.text;
                if (body.contains("base_transform")) {
                    const SessionTransform* t = h->find(body.at("base_transform").get<std::string>());
                    if (!t) throw HttpError{404, "NotFound", "no transform '" + body.at("base_transform").get<std::string>() + "'"};
                    base = t->ordering;
                }
            }
            if (!base) {
                base = body.contains("base") ? resolve_ordering(body.at("base").get<std::string>(), *text, options_.tables)
                                             : preset_ordering(Preset::ascii, *text);
            }
            AlphabetOrdering proposed = *base;
            if (body.contains("constraints")) {
                std::vector<OrderConstraint> constraints;
                for (const auto& c : body.at("constraints")) {
                    OrderConstraint oc;
                    oc.lesser = byte_from_json(c.at("lesser"));
                    oc.greater = byte_from_json(c.at("greater"));
                    constraints.push_back(oc);
                }
                proposed = combine_constraints(constraints, proposed);
            }
            if (body.contains("move")) {
                const json& mv = body.at("move");
                const std::string placement = mv.value("placement", "after");
                if (placement != "before" && placement != "after") {
                    throw HttpError{400, "MalformedRequest", "placement must be before or after"};
                }
                proposed = move_char(proposed, byte_from_json(mv.at("ch")), byte_from_json(mv.at("anchor")),
                                     placement == "before" ? Placement::before : Placement::after);
            }
            send_json(res, {{"ordering", json_io::ordering(proposed)},
                            {"base_stats", json_io::stats(evaluate_ordering(*text, *base))},
                            {"preview_stats", json_io::stats(evaluate_ordering(*text, proposed))}});
        }));

        server_.Get("/sessions/:id/export", guarded([this](const httplib::Request& req, httplib::Response& res) {
            auto h = handle(req);
            const std::string cache = req.has_param("cache") ? req.get_param_value("cache") : "false";
            Bytes data;
            {
                std::shared_lock lock(h->mutex);
                data = save_session(h->session, cache == "1" || cache == "true");
            }
            res.set_content(std::string(data.begin(), data.end()), "application/octet-stream");
            res.set_header("Content-Disposition", "attachment; filename=\"session.bwtx\"");
        }));

        server_.Post("/sessions/:id/import", guarded([this](const httplib::Request& req, httplib::Response& res) {
            auto h = handle(req);
            LoadedSession loaded = load_session(as_bytes(req.body));
            {
                std::unique_lock lock(h->mutex);
                h->session = std::move(loaded.session);
                h->next_id = h->session.transforms.size();
            }
            json body = session_summary(req.path_params.at("id"), *h);
            body["warnings"] = loaded.warnings;
            body["from_cache"] = loaded.from_cache;
            body["rebuilt"] = loaded.rebuilt;
            send_json(res, body);
        }));
    }

    static void set_highlight(SessionTransform& t, index_t row, bool on) {
        auto it = std::lower_bound(t.highlights.begin(), t.highlights.end(), row);
        const bool present = it != t.highlights.end() && *it == row;
        if (on && !present) t.highlights.insert(it, row);
        if (!on && present) t.highlights.erase(it);
    }

    std::shared_ptr<Handle> handle_by_id(const std::string& id) const {
        std::shared_lock lock(sessions_mutex_);
        return sessions_.at(id);
    }

    ServiceOptions options_;
    httplib::Server server_;
    mutable std::shared_mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<Handle>> sessions_;
    std::mutex rng_mutex_;
    std::mt19937_64 rng_{std::random_device{}()};
};

}  // namespace bwtx
