#include "planted.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace nextmethod::testing {

namespace {

constexpr const char* kLhs[] = {
    R"J(    @Override
    public boolean onCreateOptionsMenu(Menu menu) {
        MenuInflater inflater = getMenuInflater();
        inflater.inflate(R.menu.main_menu, menu);
        Log.d(TAG, "@MARK@");
        return true;
    })J",
    R"J(    @Override
    public void onCreate(SQLiteDatabase db) {
        db.execSQL("CREATE TABLE notes (_id INTEGER PRIMARY KEY, title TEXT, body TEXT)");
        db.execSQL("CREATE INDEX notes_title ON notes(title)");
        Log.w(DB_TAG, "@MARK@");
    })J",
    R"J(    @Override
    public ViewHolder onCreateViewHolder(ViewGroup parent, int viewType) {
        View view = LayoutInflater.from(parent.getContext()).inflate(R.layout.item_row, parent, false);
        Log.v(ADAPTER_TAG, "@MARK@");
        return new ViewHolder(view);
    })J",
};

constexpr const char* kRhs[] = {
    R"J(    @Override
    public boolean onOptionsItemSelected(MenuItem item) {
        int id = item.getItemId();
        if (id == R.id.action_settings) {
            startActivity(new Intent(this, SettingsActivity.class));
            Log.i(TAG, "@MARK@");
            return true;
        }
        return super.onOptionsItemSelected(item);
    })J",
    R"J(    @Override
    public void onUpgrade(SQLiteDatabase db, int oldVersion, int newVersion) {
        if (oldVersion < 2) {
            db.execSQL("ALTER TABLE notes ADD COLUMN created INTEGER");
        }
        db.setVersion(newVersion);
        Log.w(DB_TAG, "@MARK@");
    })J",
    R"J(    @Override
    public void onBindViewHolder(ViewHolder holder, int position) {
        Item item = items.get(position);
        holder.title.setText(item.getTitle());
        holder.itemView.setTag(position);
        Log.v(ADAPTER_TAG, "@MARK@");
    })J",
};

constexpr const char* kLhsSig[] = {"onCreateOptionsMenu(Menu)", "onCreate(SQLiteDatabase)",
                                   "onCreateViewHolder(ViewGroup,int)"};
constexpr const char* kRhsSig[] = {"onOptionsItemSelected(MenuItem)", "onUpgrade(SQLiteDatabase,int,int)",
                                   "onBindViewHolder(ViewHolder,int)"};

constexpr std::size_t kPatterns = 3;

class NoiseWriter {
public:
    explicit NoiseWriter(std::uint64_t seed) : rng_(seed) {}

    std::string word() {
        std::uniform_int_distribution<int> letter(0, 25);
        std::string w;
        for (int i = 0; i < 5; ++i) w += static_cast<char>('a' + letter(rng_));
        return w;
    }

    std::string cap(std::string w) {
        w[0] = static_cast<char>(w[0] - 'a' + 'A');
        return w;
    }

    int number() { return std::uniform_int_distribution<int>(2, 9999)(rng_); }

    std::string method() {
        const std::string name = word() + cap(word());
        const std::string param = word();
        const std::string local = word() + cap(word());
        const std::string helper = word() + cap(word());
        std::ostringstream out;
        out << "    private int " << name << "(int " << param << ") {\n"
            << "        int " << local << " = " << param << " * " << number() << ";\n"
            << "        " << local << " += " << helper << "(" << local << ", " << number() << ");\n"
            << "        String " << word() << " = \"" << word() << " " << word() << "\";\n"
            << "        return " << local << " - " << number() << ";\n"
            << "    }";
        return out.str();
    }

    std::vector<std::string> methods(std::size_t n) {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < n; ++i) out.push_back(method());
        return out;
    }

    std::mt19937_64& rng() { return rng_; }

private:
    std::mt19937_64 rng_;
};

constexpr const char* kExisting = R"(    private void init() {
        setContentView(R.layout.activity_main);
    })";

struct Draft {
    std::vector<std::string> methods;
    bool with_existing = false;
};

}  // namespace

std::string planted_method(std::size_t pattern, bool rhs, const std::string& marker) {
    std::string text = rhs ? kRhs[pattern % kPatterns] : kLhs[pattern % kPatterns];
    const auto pos = text.find("@MARK@");
    text.replace(pos, 6, marker);
    return text;
}

std::string java_class(const std::string& package, const std::string& name, const std::vector<std::string>& methods) {
    std::string out = "package " + package + ";\n\nimport android.util.Log;\n\npublic class " + name + " {\n";
    for (std::size_t i = 0; i < methods.size(); ++i) out += (i ? "\n\n" : "") + methods[i];
    return out + "\n}\n";
}

std::size_t PlantedCorpus::train_transactions() const {
    return patterns.size() * (options.train_planted + options.train_rhs_alone) + options.train_noise;
}

PlantedCorpus make_planted_corpus(const PlantedOptions& options) {
    PlantedCorpus corpus;
    corpus.options = options;
    for (std::size_t k = 0; k < kPatterns; ++k) corpus.patterns.push_back({kLhsSig[k], kRhsSig[k]});

    NoiseWriter noise(options.seed);
    std::size_t marker = 0;
    auto next_marker = [&](std::size_t k) { return "pattern " + std::to_string(k) + " note " + std::to_string(++marker); };

    auto planted = [&](std::size_t k, std::size_t i) {
        Draft d;
        d.methods = {planted_method(k, false, next_marker(k)), planted_method(k, true, next_marker(k))};
        if (i % 2 == 1) std::swap(d.methods[0], d.methods[1]);
        if (i % 3 == 2) d.methods.push_back(noise.method());
        d.with_existing = i % 2 == 0;
        return d;
    };
    auto block = [&](std::size_t planted_per_pattern, std::size_t rhs_alone, std::size_t noise_commits) {
        std::vector<Draft> drafts;
        for (std::size_t k = 0; k < kPatterns; ++k) {
            for (std::size_t i = 0; i < planted_per_pattern; ++i) drafts.push_back(planted(k, i));
            for (std::size_t i = 0; i < rhs_alone; ++i) {
                Draft d;
                d.methods = noise.methods(1 + i % 2);
                d.methods.push_back(planted_method(k, true, next_marker(k)));
                drafts.push_back(std::move(d));
            }
        }
        for (std::size_t i = 0; i < noise_commits; ++i) drafts.push_back(Draft{noise.methods(2 + i % 3), i % 4 == 0});
        std::shuffle(drafts.begin(), drafts.end(), noise.rng());
        return drafts;
    };

    auto train = block(options.train_planted, options.train_rhs_alone, options.train_noise);
    train.push_back(Draft{noise.methods(1), false});   // below the filter
    train.push_back(Draft{noise.methods(11), false});  // above the filter
    std::shuffle(train.begin(), train.end(), noise.rng());
    const auto validation = block(options.validation_planted, 0, options.validation_noise);
    const auto test = block(options.test_planted, 0, options.test_noise);

    constexpr std::int64_t kEpoch = 1'600'000'000;
    constexpr std::int64_t kStep = 3600;
    std::size_t serial = 0;
    auto emit = [&](const std::vector<Draft>& drafts, std::int64_t first, std::int64_t last) {
        for (std::size_t i = 0; i < drafts.size(); ++i) {
            const std::int64_t t =
                drafts.size() == 1 ? first
                                   : first + static_cast<std::int64_t>(i) * (last - first) /
                                                 static_cast<std::int64_t>(drafts.size() - 1);
            ++serial;
            CommitRecord c;
            c.repo_id = "github.com/example/app" + std::to_string(serial % 7);
            char id[16];
            std::snprintf(id, sizeof id, "%08zx", serial * 2654435761u % 0xffffffffu);
            c.commit_id = id;
            c.timestamp = kEpoch + t * kStep;
            const std::string package = "com.example.app" + std::to_string(serial % 7);
            const std::string cls = "Screen" + std::to_string(serial);
            FileChange f;
            f.path = "app/src/main/java/com/example/" + cls + ".java";
            std::vector<std::string> after = drafts[i].methods;
            if (drafts[i].with_existing) {
                f.before_source = java_class(package, cls, {kExisting});
                after.insert(after.begin(), kExisting);
            }
            f.after_source = java_class(package, cls, after);
            c.files.push_back(std::move(f));
            corpus.commits.push_back(std::move(c));
        }
    };
    // Block layout on a 0..100 hour axis: the default split points fall at
    // 80 and 90, which no commit touches.
    emit(train, 0, 79);
    emit(validation, 81, 89);
    emit(test, 91, 100);
    return corpus;
}

}  // namespace nextmethod::testing
