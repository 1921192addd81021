#pragma once

// Built-in per-language prompt catalog text. Wait, initiation, answer and
// system prompts are reproduced verbatim; the demonstration is a one-shot
// worked solution of the Gaussian integral that re-thinks once after a wait
// prompt, rendered in each language.

#include <array>
#include <string_view>

namespace mlscale::prompts {

struct Entry {
  std::string_view code;
  std::string_view system;
  std::string_view demonstration;
  std::string_view initiation;
  std::string_view wait;
  std::string_view answer;
};

inline constexpr std::string_view kEnDemo =
    R"(Question: What is the value of the Gaussian integral \( \int_{-\infty}^{\infty} e^{-x^2} \, dx \)?
Let I denote the integral. Squaring it gives I^2 = \int\int e^{-(x^2+y^2)} dx dy over the whole plane. Switching to polar coordinates, x^2+y^2 = r^2 and dx dy = r dr d\theta, so I^2 = \int_0^{2\pi} \int_0^{\infty} e^{-r^2} r dr d\theta = 2\pi \cdot 1/2 = \pi. Since the integrand is positive, I = \sqrt{\pi}. \( \boxed{\sqrt{\pi}} \)
Let me re-think my reasoning from scratch.
Substitute t = x^2 on the positive half-line: \int_0^{\infty} e^{-x^2} dx = (1/2) \int_0^{\infty} t^{-1/2} e^{-t} dt = (1/2) \Gamma(1/2) = \sqrt{\pi}/2. The integrand is even, so the full integral is twice this value, which again equals \sqrt{\pi}. \( \boxed{\sqrt{\pi}} \))";

inline constexpr std::string_view kDeDemo =
    R"(Frage: Welchen Wert hat das Gaußsche Integral \( \int_{-\infty}^{\infty} e^{-x^2} \, dx \)?
Sei I das Integral. Durch Quadrieren erhalten wir I^2 = \int\int e^{-(x^2+y^2)} dx dy über die ganze Ebene. Wir wechseln zu Polarkoordinaten, dann ist x^2+y^2 = r^2 und dx dy = r dr d\theta, also I^2 = \int_0^{2\pi} \int_0^{\infty} e^{-r^2} r dr d\theta = 2\pi \cdot 1/2 = \pi. Da der Integrand positiv ist, gilt I = \sqrt{\pi}. \( \boxed{\sqrt{\pi}} \)
Lass mich mein Denken von Grund auf neu überdenken.
Wir substituieren t = x^2 auf der positiven Halbachse: \int_0^{\infty} e^{-x^2} dx = (1/2) \int_0^{\infty} t^{-1/2} e^{-t} dt = (1/2) \Gamma(1/2) = \sqrt{\pi}/2. Der Integrand ist gerade, also ist das ganze Integral doppelt so groß, und das ergibt wieder \sqrt{\pi}. \( \boxed{\sqrt{\pi}} \))";

inline constexpr std::string_view kItDemo =
    R"(Domanda: Qual è il valore dell'integrale gaussiano \( \int_{-\infty}^{\infty} e^{-x^2} \, dx \)?
Sia I l'integrale. Elevandolo al quadrato otteniamo I^2 = \int\int e^{-(x^2+y^2)} dx dy su tutto il piano. Passando alle coordinate polari, x^2+y^2 = r^2 e dx dy = r dr d\theta, quindi I^2 = \int_0^{2\pi} \int_0^{\infty} e^{-r^2} r dr d\theta = 2\pi \cdot 1/2 = \pi. Poiché la funzione integranda è positiva, I = \sqrt{\pi}. \( \boxed{\sqrt{\pi}} \)
Fammi ripensare il mio ragionamento da capo.
Sostituiamo t = x^2 sulla semiretta positiva: \int_0^{\infty} e^{-x^2} dx = (1/2) \int_0^{\infty} t^{-1/2} e^{-t} dt = (1/2) \Gamma(1/2) = \sqrt{\pi}/2. La funzione integranda è pari, quindi l'integrale completo è il doppio di questo valore, cioè di nuovo \sqrt{\pi}. \( \boxed{\sqrt{\pi}} \))";

inline constexpr std::string_view kPtDemo =
    R"(Pergunta: Qual é o valor da integral gaussiana \( \int_{-\infty}^{\infty} e^{-x^2} \, dx \)?
Seja I a integral. Elevando ao quadrado obtemos I^2 = \int\int e^{-(x^2+y^2)} dx dy sobre todo o plano. Passando para coordenadas polares, x^2+y^2 = r^2 e dx dy = r dr d\theta, então I^2 = \int_0^{2\pi} \int_0^{\infty} e^{-r^2} r dr d\theta = 2\pi \cdot 1/2 = \pi. Como o integrando é positivo, I = \sqrt{\pi}. \( \boxed{\sqrt{\pi}} \)
Deixe-me repensar meu raciocínio do zero.
Substituímos t = x^2 na semirreta positiva: \int_0^{\infty} e^{-x^2} dx = (1/2) \int_0^{\infty} t^{-1/2} e^{-t} dt = (1/2) \Gamma(1/2) = \sqrt{\pi}/2. O integrando é par, então a integral inteira é o dobro desse valor, o que dá novamente \sqrt{\pi}. \( \boxed{\sqrt{\pi}} \))";

inline constexpr std::string_view kViDemo =
    R"(Câu hỏi: Giá trị của tích phân Gauss \( \int_{-\infty}^{\infty} e^{-x^2} \, dx \) là bao nhiêu?
Gọi I là tích phân cần tính. Bình phương lên ta được I^2 = \int\int e^{-(x^2+y^2)} dx dy trên toàn mặt phẳng. Chuyển sang tọa độ cực, x^2+y^2 = r^2 và dx dy = r dr d\theta, nên I^2 = \int_0^{2\pi} \int_0^{\infty} e^{-r^2} r dr d\theta = 2\pi \cdot 1/2 = \pi. Vì hàm dưới dấu tích phân dương nên I = \sqrt{\pi}. \( \boxed{\sqrt{\pi}} \)
Hãy để tôi suy nghĩ lại từ đầu.
Đặt t = x^2 trên nửa trục dương: \int_0^{\infty} e^{-x^2} dx = (1/2) \int_0^{\infty} t^{-1/2} e^{-t} dt = (1/2) \Gamma(1/2) = \sqrt{\pi}/2. Hàm dưới dấu tích phân là hàm chẵn, nên tích phân trên toàn trục gấp đôi giá trị này, tức là lại bằng \sqrt{\pi}. \( \boxed{\sqrt{\pi}} \))";

inline constexpr std::string_view kTlDemo =
    R"(Tanong: Ano ang halaga ng Gaussian integral na \( \int_{-\infty}^{\infty} e^{-x^2} \, dx \)?
Hayaang I ang integral. Kapag kinuwadrado natin ito, makukuha natin ang I^2 = \int\int e^{-(x^2+y^2)} dx dy sa buong plano. Lilipat tayo sa polar coordinates, kung saan x^2+y^2 = r^2 at dx dy = r dr d\theta, kaya I^2 = \int_0^{2\pi} \int_0^{\infty} e^{-r^2} r dr d\theta = 2\pi \cdot 1/2 = \pi. Dahil positibo ang integrand, I = \sqrt{\pi}. \( \boxed{\sqrt{\pi}} \)
Hayaan mo akong muling pag-isipan ang aking pangangatwiran mula sa simula.
Ilagay ang t = x^2 sa positibong kalahati ng linya: \int_0^{\infty} e^{-x^2} dx = (1/2) \int_0^{\infty} t^{-1/2} e^{-t} dt = (1/2) \Gamma(1/2) = \sqrt{\pi}/2. Even ang integrand, kaya ang buong integral ay doble ng halagang ito, na muling katumbas ng \sqrt{\pi}. \( \boxed{\sqrt{\pi}} \))";

inline constexpr std::array<Entry, 6> kDefaults{{
    {"en",
     R"(You are a mathematical question-answering assistant. Always use English for all reasoning, explanations, and answers. Never switch to any other language at any point. A mathematical question will be provided in English. First, give a detailed explanation in English that leads to the solution. Then, output the final answer using the format \( \boxed{...} \) — but only after the full reasoning is completed in English. Do not translate anything. Maintain full linguistic consistency in English from start to finish. This rule must never be broken.)",
     kEnDemo, "Let us think step-by-step in English.",
     "Let me re-think my reasoning from scratch.",
     "Stop thinking. What is the final answer? Output only the raw number in the format \\( \\boxed{} \\). No text, no symbols, no punctuation. Just the number.\n\nAnswer:"},
    {"de",
     R"(Du bist ein Assistent zur Lösung mathematischer Aufgaben. Verwende immer Deutsch für alle Überlegungen, Erklärungen und Antworten. Wechsle niemals zur englischen Sprache oder einer anderen Sprache. Dir wird eine mathematische Frage auf Deutsch gestellt. Erkläre zunächst ausführlich auf Deutsch, wie man zur Lösung kommt. Dann gib die endgültige Antwort im Format \( \boxed{...} \) an — aber nur, nachdem die gesamte Begründung auf Deutsch abgeschlossen ist. Übersetze nichts ins Englische. Bleibe vollständig bei der deutschen Sprache. Diese Regel darf niemals gebrochen werden.)",
     kDeDemo, "Lass uns Schritt für Schritt auf Deutsch denken.",
     "Lass mich mein Denken von Grund auf neu überdenken.",
     "Hör auf zu denken. Was ist die endgültige Antwort? Gib nur die reine Zahl im Format \\( \\boxed{} \\) aus. Kein Text, keine Symbole, keine Satzzeichen. Nur die Zahl.\n\nAntwort:"},
    {"it",
     R"(Sei un assistente per la risoluzione di problemi matematici. Usa sempre l'italiano per tutti i ragionamenti, le spiegazioni e le risposte. Non passare mai all'inglese o a un'altra lingua. Ti verrà fornita una domanda matematica in italiano. Fornisci prima una spiegazione dettagliata in italiano che conduca alla soluzione. Poi, fornisci la risposta finale usando il formato \( \boxed{...} \), ma solo dopo che il ragionamento completo è stato fornito in italiano. Non tradurre nulla in inglese. Mantieni la coerenza linguistica completa in italiano dall'inizio alla fine. Questa regola non deve mai essere infranta.)",
     kItDemo, "Pensiamo passo dopo passo in italiano.",
     "Fammi ripensare il mio ragionamento da capo.",
     "Smetti di pensare. Qual è la risposta finale? Mostra solo il numero grezzo nel formato \\( \\boxed{} \\). Nessun testo, nessun simbolo, nessuna punteggiatura. Solo il numero.\n\nRisposta:"},
    {"pt",
     R"(Você é um assistente de resolução de questões matemáticas. Sempre use o português para todos os raciocínios, explicações e respostas. Nunca mude para o inglês ou qualquer outro idioma. Uma pergunta matemática será fornecida em português. Primeiro, forneça um raciocínio detalhado em português que leve à solução. Depois, apresente a resposta final usando o formato \( \boxed{...} \), mas somente após concluir todo o raciocínio em português. Não traduza nada para o inglês. Mantenha total consistência linguística em português do início ao fim. Esta regra nunca deve ser quebrada.)",
     kPtDemo, "Vamos pensar passo a passo em português.",
     "Deixe-me repensar meu raciocínio do zero.",
     "Pare de pensar. Qual é a resposta final? Mostre apenas o número bruto no formato \\( \\boxed{} \\). Sem texto, sem símbolos, sem pontuação. Apenas o número.\n\nResposta:"},
    {"vi",
     R"(Bạn là một trợ lý giải toán. Luôn sử dụng tiếng Việt cho toàn bộ phần lập luận, giải thích và câu trả lời. Tuyệt đối không chuyển sang tiếng Anh hoặc bất kỳ ngôn ngữ nào khác. Một câu hỏi toán học sẽ được đưa ra bằng tiếng Việt. Trước tiên, hãy giải thích chi tiết bằng tiếng Việt dẫn đến cách giải. Sau đó, đưa ra đáp án cuối cùng bằng định dạng \( \boxed{...} \) — nhưng chỉ sau khi phần giải thích hoàn toàn bằng tiếng Việt đã được trình bày. Tuyệt đối không dịch bất cứ phần nào sang tiếng Anh. Phải giữ sự nhất quán ngôn ngữ tiếng Việt từ đầu đến cuối. Đây là nguyên tắc bắt buộc.)",
     kViDemo, "Hãy suy nghĩ từng bước bằng tiếng Việt.",
     "Hãy để tôi suy nghĩ lại từ đầu.",
     "Dừng suy nghĩ. Đáp án cuối cùng là gì? Chỉ xuất ra con số thô ở định dạng \\( \\boxed{} \\). Không có văn bản, ký hiệu hoặc dấu câu. Chỉ số thôi.\n\nĐáp án:"},
    {"tl",
     R"(Ikaw ay isang assistant na sumasagot sa mga tanong sa matematika. Palaging gumamit ng Tagalog para sa lahat ng pangangatwiran, paliwanag, at sagot. Huwag kailanman lumipat sa anumang ibang wika sa kahit anong punto. Ang isang tanong sa matematika ay ibibigay sa Tagalog. Una, magbigay ng detalyadong paliwanag sa Tagalog na humahantong sa solusyon. Pagkatapos, ibigay ang panghuling sagot gamit ang format na \( \boxed{...} \) — ngunit gawin ito lamang pagkatapos makumpleto ang buong paliwanag sa Tagalog. Huwag magsalin ng anuman. Panatilihin ang buong pagkakapare-pareho ng wika sa Tagalog mula simula hanggang wakas. Ang panuntunang ito ay hindi dapat labagin kailanman.)",
     kTlDemo, "Mag-isip tayo nang sunud-sunod sa Tagalog.",
     "Hayaan mo akong muling pag-isipan ang aking pangangatwiran mula sa simula.",
     "Itigil ang pag-iisip. Ano ang huling sagot? I-output lamang ang hilaw na numero sa format na \\( \\boxed{} \\). Walang teksto, walang simbolo, walang bantas. Numero lamang.\n\nSagot:"},
}};

}  // namespace mlscale::prompts
