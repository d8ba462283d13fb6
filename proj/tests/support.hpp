// Copyright 2026 The TCA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <memory>
#include <random>
#include <string>

#include "doctest.h"
#include "tca/error.hpp"
#include "tca/lexicon.hpp"

// Asserts that `expr` throws tca::Error carrying `code`.
#define CHECK_CODE(expr, expected_code)                    \
    do {                                                   \
        try {                                              \
            (void)(expr);                                  \
            FAIL_CHECK("expected " #expected_code);        \
        } catch (const ::tca::Error& e_) {                 \
            CHECK_MESSAGE(e_.code() == (expected_code), e_.what()); \
        }                                                  \
    } while (0)

namespace tca::test {

inline std::shared_ptr<const LexiconSet> default_lexicons() {
    static const auto lex = std::make_shared<const LexiconSet>(load_lexicon(default_lexicon_path()));
    return lex;
}

// Removed on destruction.
class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("tca-test-" + std::to_string(rd()) + "-" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};


}  // namespace tca::test
