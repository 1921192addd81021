#pragma once

// Seed text for the built-in language identifier and the mock completion
// server's token vocabulary. Original prose written for this project; the
// register (step-by-step mathematical reasoning) matches what the identifier
// has to label in practice.

#include <string_view>

namespace mlscale::seed {

inline constexpr std::string_view kEnglish = R"(
First we read the problem carefully and write down what is given. We are told that the sum of two numbers is forty and their difference is ten, so we can call the larger number a and the smaller number b. Adding the two equations gives two times a equal to fifty, which means that a is twenty five and b is fifteen. Before we move on, let us check the result by substituting both values back into the original conditions. The sum is indeed forty and the difference is indeed ten, so the pair is correct.
Now consider the next part of the question, which asks for the number of ways to arrange the letters of a short word. When all letters are different, the count is simply the factorial of the length of the word. However, this word contains a repeated letter, so we must divide by the factorial of the number of repetitions. That gives us a smaller count than the naive approach would suggest, and it is the answer we are looking for.
Let me think about the geometry more carefully. The triangle has a right angle at the corner where the two shorter sides meet, so the Pythagorean theorem applies directly. The square of the longest side equals the sum of the squares of the other two sides. Since the legs measure six and eight, the hypotenuse must be ten. The area of the triangle is half the product of the legs, which is twenty four.
We should also think about whether there is a simpler way to see this. Sometimes it helps to draw a picture and label every point. If we place the triangle on a coordinate grid with the right angle at the origin, the computation becomes almost mechanical. The distance between two points is the square root of the sum of the squared differences of their coordinates.
Next, the problem asks for the remainder when a large power is divided by a small number. Instead of computing the whole power, we can look at the pattern of remainders. The remainders repeat with a short period, so we only need to know the exponent modulo that period. This trick saves a lot of work and avoids mistakes with huge numbers.
Suppose the sequence is defined by a simple rule where each term is the sum of the two previous terms. We can list the first few terms by hand and look for a pattern. After a while the pattern becomes clear, and we can prove it by induction. The base case holds, and if the statement is true for one step, it is also true for the following step.
Wait, I need to double check the earlier calculation because the numbers seem too large. Going back to the start, I notice that I added instead of multiplied in the second line. Correcting that error changes the final value, so I will redo the remaining steps with the right expression. It is always worth checking each step, especially when the answer looks suspicious.
The probability that both events happen is the product of their individual probabilities, provided that the events are independent. Here the first draw does not affect the second draw because the ball is returned to the bag. Therefore the probability is one third times one third, which equals one ninth. If the ball were not returned, we would have to adjust the second factor.
To find the maximum of the function, we take the derivative and set it equal to zero. The derivative is a linear expression, so there is exactly one critical point. Checking the second derivative shows that the function curves downward, which means the critical point is indeed a maximum. Plugging it back into the function gives the largest possible value.
Let us count the number of integers between one and one thousand that are divisible by three or by five. By the principle of inclusion and exclusion, we add the multiples of three and the multiples of five and then subtract the multiples of fifteen, because those were counted twice. This gives a clean answer without listing every number.
The circle passes through three given points, and we want to find its radius. One approach is to find the perpendicular bisectors of two chords and compute where they intersect. That intersection is the center of the circle, and the distance from the center to any of the three points is the radius. With careful arithmetic the answer turns out to be a whole number.
Another useful idea is to work backwards from what we want to prove. If we need to show that an expression is always positive, we can try to write it as a sum of squares. Squares are never negative, and the sum can only be zero when every square is zero. This often leads to a short and elegant argument.
Finally, we combine all of the partial results. The first part gave us twenty five, the second part gave us a count of arrangements, and the geometry gave us an area of twenty four. The question asks for the sum of these quantities, so we add them carefully and reduce the result modulo one thousand as the problem requires. The final answer is the number we obtain after this last step.
Looking at the problem from a different angle, we might ask what happens when the parameter grows very large. In that case the dominant term controls the behaviour of the whole expression, and the smaller terms become negligible. This kind of estimate is useful for checking whether an exact answer is reasonable before we commit to it.
We also need to make sure that every case has been covered. The number can be even or odd, and the two cases behave differently under division by two. For the even case the argument is straightforward, while for the odd case we need one extra step. Once both cases are handled, the proof is complete and we can state the result with confidence.
)";

inline constexpr std::string_view kGerman = R"(
Zuerst lesen wir die Aufgabe sorgfältig durch und schreiben auf, was gegeben ist. Es wird gesagt, dass die Summe zweier Zahlen vierzig beträgt und ihre Differenz zehn ist, also nennen wir die größere Zahl a und die kleinere Zahl b. Wenn wir die beiden Gleichungen addieren, erhalten wir zwei mal a gleich fünfzig, das heißt a ist fünfundzwanzig und b ist fünfzehn. Bevor wir weitermachen, überprüfen wir das Ergebnis, indem wir beide Werte in die ursprünglichen Bedingungen einsetzen. Die Summe ist tatsächlich vierzig und die Differenz ist tatsächlich zehn, also ist das Paar richtig.
Nun betrachten wir den nächsten Teil der Frage, in dem nach der Anzahl der Möglichkeiten gefragt wird, die Buchstaben eines kurzen Wortes anzuordnen. Wenn alle Buchstaben verschieden sind, ist die Anzahl einfach die Fakultät der Wortlänge. Dieses Wort enthält jedoch einen doppelten Buchstaben, deshalb müssen wir durch die Fakultät der Anzahl der Wiederholungen teilen. Damit erhalten wir eine kleinere Zahl, als der naive Ansatz vermuten ließe, und genau diese Zahl suchen wir.
Ich denke noch einmal genauer über die Geometrie nach. Das Dreieck hat einen rechten Winkel an der Ecke, an der sich die beiden kürzeren Seiten treffen, also lässt sich der Satz des Pythagoras direkt anwenden. Das Quadrat der längsten Seite ist gleich der Summe der Quadrate der beiden anderen Seiten. Da die Katheten sechs und acht lang sind, muss die Hypotenuse zehn sein. Der Flächeninhalt des Dreiecks ist die Hälfte des Produkts der Katheten, also vierundzwanzig.
Wir sollten auch überlegen, ob es einen einfacheren Weg gibt, das zu sehen. Manchmal hilft es, eine Skizze zu zeichnen und jeden Punkt zu beschriften. Wenn wir das Dreieck in ein Koordinatensystem legen, mit dem rechten Winkel im Ursprung, wird die Rechnung fast mechanisch. Der Abstand zwischen zwei Punkten ist die Wurzel aus der Summe der quadrierten Differenzen ihrer Koordinaten.
Als Nächstes fragt die Aufgabe nach dem Rest, wenn eine große Potenz durch eine kleine Zahl geteilt wird. Anstatt die ganze Potenz auszurechnen, können wir das Muster der Reste betrachten. Die Reste wiederholen sich mit einer kurzen Periode, daher müssen wir nur den Exponenten modulo dieser Periode kennen. Dieser Trick spart viel Arbeit und vermeidet Fehler mit riesigen Zahlen.
Angenommen, die Folge ist durch eine einfache Regel definiert, bei der jedes Glied die Summe der beiden vorherigen Glieder ist. Wir können die ersten Glieder von Hand aufschreiben und nach einem Muster suchen. Nach einer Weile wird das Muster deutlich, und wir können es durch vollständige Induktion beweisen. Der Induktionsanfang gilt, und wenn die Aussage für einen Schritt wahr ist, dann ist sie auch für den folgenden Schritt wahr.
Moment, ich muss die frühere Rechnung noch einmal überprüfen, weil die Zahlen zu groß erscheinen. Wenn ich zum Anfang zurückgehe, bemerke ich, dass ich in der zweiten Zeile addiert statt multipliziert habe. Die Korrektur dieses Fehlers verändert den Endwert, also rechne ich die restlichen Schritte mit dem richtigen Ausdruck neu. Es lohnt sich immer, jeden Schritt zu kontrollieren, besonders wenn die Antwort verdächtig aussieht.
Die Wahrscheinlichkeit, dass beide Ereignisse eintreten, ist das Produkt ihrer einzelnen Wahrscheinlichkeiten, vorausgesetzt die Ereignisse sind unabhängig. Hier beeinflusst die erste Ziehung die zweite nicht, weil die Kugel in den Beutel zurückgelegt wird. Deshalb ist die Wahrscheinlichkeit ein Drittel mal ein Drittel, also ein Neuntel. Wenn die Kugel nicht zurückgelegt würde, müssten wir den zweiten Faktor anpassen.
Um das Maximum der Funktion zu finden, bilden wir die Ableitung und setzen sie gleich null. Die Ableitung ist ein linearer Ausdruck, also gibt es genau eine kritische Stelle. Die zweite Ableitung zeigt, dass die Funktion nach unten gekrümmt ist, folglich ist die kritische Stelle tatsächlich ein Maximum. Setzen wir sie wieder in die Funktion ein, erhalten wir den größtmöglichen Wert.
Zählen wir die ganzen Zahlen zwischen eins und tausend, die durch drei oder durch fünf teilbar sind. Nach dem Prinzip der Inklusion und Exklusion addieren wir die Vielfachen von drei und die Vielfachen von fünf und ziehen dann die Vielfachen von fünfzehn ab, weil diese doppelt gezählt wurden. So erhalten wir eine saubere Antwort, ohne jede Zahl aufzulisten.
Der Kreis geht durch drei gegebene Punkte, und wir wollen seinen Radius bestimmen. Ein Ansatz besteht darin, die Mittelsenkrechten zweier Sehnen zu finden und ihren Schnittpunkt zu berechnen. Dieser Schnittpunkt ist der Mittelpunkt des Kreises, und der Abstand vom Mittelpunkt zu einem der drei Punkte ist der Radius. Mit sorgfältiger Rechnung ergibt sich eine ganze Zahl.
Eine weitere nützliche Idee ist es, rückwärts von dem auszugehen, was wir beweisen wollen. Wenn wir zeigen müssen, dass ein Ausdruck immer positiv ist, können wir versuchen, ihn als Summe von Quadraten zu schreiben. Quadrate sind niemals negativ, und die Summe kann nur null sein, wenn jedes Quadrat null ist. Das führt oft zu einem kurzen und eleganten Argument.
Schließlich fassen wir alle Teilergebnisse zusammen. Der erste Teil ergab fünfundzwanzig, der zweite Teil lieferte eine Anzahl von Anordnungen, und die Geometrie ergab einen Flächeninhalt von vierundzwanzig. Die Frage verlangt die Summe dieser Größen, also addieren wir sie sorgfältig und reduzieren das Ergebnis modulo tausend, wie es die Aufgabe verlangt. Die endgültige Antwort ist die Zahl, die wir nach diesem letzten Schritt erhalten.
Wenn wir die Aufgabe aus einem anderen Blickwinkel betrachten, können wir fragen, was passiert, wenn der Parameter sehr groß wird. In diesem Fall bestimmt der führende Term das Verhalten des ganzen Ausdrucks, und die kleineren Terme werden vernachlässigbar. Eine solche Abschätzung ist nützlich, um zu prüfen, ob eine exakte Antwort vernünftig ist, bevor wir uns festlegen.
Wir müssen außerdem sicherstellen, dass jeder Fall berücksichtigt wurde. Die Zahl kann gerade oder ungerade sein, und die beiden Fälle verhalten sich bei der Division durch zwei unterschiedlich. Für den geraden Fall ist das Argument einfach, während wir für den ungeraden Fall einen zusätzlichen Schritt brauchen. Sobald beide Fälle behandelt sind, ist der Beweis vollständig, und wir können das Ergebnis mit Sicherheit angeben.
)";

inline constexpr std::string_view kItalian = R"(
Per prima cosa leggiamo attentamente il problema e scriviamo ciò che è dato. Ci viene detto che la somma di due numeri è quaranta e che la loro differenza è dieci, quindi chiamiamo a il numero più grande e b il numero più piccolo. Sommando le due equazioni otteniamo due volte a uguale a cinquanta, il che significa che a vale venticinque e b vale quindici. Prima di andare avanti, verifichiamo il risultato sostituendo entrambi i valori nelle condizioni originali. La somma è davvero quaranta e la differenza è davvero dieci, quindi la coppia è corretta.
Ora consideriamo la parte successiva della domanda, che chiede il numero di modi per disporre le lettere di una parola breve. Quando tutte le lettere sono diverse, il conteggio è semplicemente il fattoriale della lunghezza della parola. Tuttavia questa parola contiene una lettera ripetuta, perciò dobbiamo dividere per il fattoriale del numero di ripetizioni. Così otteniamo un numero più piccolo di quello suggerito dall'approccio ingenuo, ed è proprio la risposta che cerchiamo.
Pensiamo con più attenzione alla geometria. Il triangolo ha un angolo retto nel vertice in cui si incontrano i due lati più corti, quindi il teorema di Pitagora si applica direttamente. Il quadrato del lato più lungo è uguale alla somma dei quadrati degli altri due lati. Poiché i cateti misurano sei e otto, l'ipotenusa deve essere dieci. L'area del triangolo è la metà del prodotto dei cateti, cioè ventiquattro.
Dovremmo anche chiederci se esiste un modo più semplice per vederlo. A volte è utile fare un disegno e dare un nome a ogni punto. Se collochiamo il triangolo in un piano cartesiano con l'angolo retto nell'origine, il calcolo diventa quasi meccanico. La distanza tra due punti è la radice quadrata della somma dei quadrati delle differenze delle loro coordinate.
Successivamente il problema chiede il resto della divisione di una potenza grande per un numero piccolo. Invece di calcolare tutta la potenza, possiamo osservare lo schema dei resti. I resti si ripetono con un periodo breve, quindi basta conoscere l'esponente modulo quel periodo. Questo trucco fa risparmiare molto lavoro ed evita errori con numeri enormi.
Supponiamo che la successione sia definita da una regola semplice in cui ogni termine è la somma dei due termini precedenti. Possiamo scrivere a mano i primi termini e cercare una regolarità. Dopo un po' la regolarità diventa chiara e possiamo dimostrarla per induzione. Il caso base è vero, e se l'affermazione vale per un passo, allora vale anche per il passo successivo.
Aspetta, devo ricontrollare il calcolo precedente perché i numeri sembrano troppo grandi. Tornando all'inizio, noto che nella seconda riga ho sommato invece di moltiplicare. Correggere questo errore cambia il valore finale, quindi rifarò i passaggi rimanenti con l'espressione giusta. Vale sempre la pena di controllare ogni passaggio, soprattutto quando la risposta sembra sospetta.
La probabilità che entrambi gli eventi accadano è il prodotto delle loro probabilità singole, purché gli eventi siano indipendenti. Qui la prima estrazione non influisce sulla seconda perché la pallina viene rimessa nel sacchetto. Pertanto la probabilità è un terzo per un terzo, cioè un nono. Se la pallina non venisse rimessa, dovremmo modificare il secondo fattore.
Per trovare il massimo della funzione calcoliamo la derivata e la poniamo uguale a zero. La derivata è un'espressione lineare, quindi esiste esattamente un punto critico. Controllando la derivata seconda vediamo che la funzione è concava verso il basso, perciò il punto critico è davvero un massimo. Sostituendolo nella funzione otteniamo il valore più grande possibile.
Contiamo i numeri interi tra uno e mille che sono divisibili per tre oppure per cinque. Secondo il principio di inclusione ed esclusione, sommiamo i multipli di tre e i multipli di cinque e poi sottraiamo i multipli di quindici, perché questi sono stati contati due volte. In questo modo otteniamo una risposta pulita senza elencare ogni numero.
La circonferenza passa per tre punti dati e vogliamo trovarne il raggio. Un approccio consiste nel trovare gli assi di due corde e calcolare dove si intersecano. Quel punto di intersezione è il centro della circonferenza, e la distanza dal centro a uno qualsiasi dei tre punti è il raggio. Con un calcolo attento il risultato è un numero intero.
Un'altra idea utile è ragionare all'indietro partendo da ciò che vogliamo dimostrare. Se dobbiamo mostrare che un'espressione è sempre positiva, possiamo provare a scriverla come somma di quadrati. I quadrati non sono mai negativi, e la somma può essere zero solo quando ogni quadrato è zero. Questo porta spesso a un ragionamento breve ed elegante.
Infine mettiamo insieme tutti i risultati parziali. La prima parte ci ha dato venticinque, la seconda parte ci ha dato un numero di disposizioni, e la geometria ci ha dato un'area di ventiquattro. La domanda chiede la somma di queste quantità, quindi le sommiamo con attenzione e riduciamo il risultato modulo mille come richiede il problema. La risposta finale è il numero che otteniamo dopo quest'ultimo passaggio.
Guardando il problema da un'altra prospettiva, possiamo chiederci che cosa succede quando il parametro diventa molto grande. In quel caso il termine dominante controlla il comportamento di tutta l'espressione e i termini più piccoli diventano trascurabili. Questo tipo di stima è utile per verificare se una risposta esatta è ragionevole prima di accettarla.
Dobbiamo anche assicurarci che ogni caso sia stato considerato. Il numero può essere pari o dispari, e i due casi si comportano in modo diverso nella divisione per due. Per il caso pari il ragionamento è immediato, mentre per il caso dispari serve un passaggio in più. Una volta trattati entrambi i casi, la dimostrazione è completa e possiamo enunciare il risultato con sicurezza.
)";

inline constexpr std::string_view kPortuguese = R"(
Primeiro lemos o problema com atenção e escrevemos o que é dado. Sabemos que a soma de dois números é quarenta e que a diferença entre eles é dez, então chamamos o número maior de a e o número menor de b. Somando as duas equações obtemos duas vezes a igual a cinquenta, o que significa que a vale vinte e cinco e b vale quinze. Antes de continuar, vamos conferir o resultado substituindo os dois valores nas condições originais. A soma é de fato quarenta e a diferença é de fato dez, portanto o par está correto.
Agora consideramos a próxima parte da questão, que pergunta de quantas maneiras podemos organizar as letras de uma palavra curta. Quando todas as letras são diferentes, a contagem é simplesmente o fatorial do comprimento da palavra. Porém esta palavra tem uma letra repetida, então precisamos dividir pelo fatorial do número de repetições. Isso nos dá uma contagem menor do que a abordagem ingênua sugeriria, e é exatamente a resposta que procuramos.
Vou pensar na geometria com mais cuidado. O triângulo tem um ângulo reto no vértice onde os dois lados menores se encontram, então o teorema de Pitágoras se aplica diretamente. O quadrado do lado maior é igual à soma dos quadrados dos outros dois lados. Como os catetos medem seis e oito, a hipotenusa deve ser dez. A área do triângulo é metade do produto dos catetos, ou seja, vinte e quatro.
Também devemos pensar se existe uma maneira mais simples de enxergar isso. Às vezes ajuda fazer um desenho e nomear cada ponto. Se colocarmos o triângulo num plano cartesiano com o ângulo reto na origem, a conta fica quase mecânica. A distância entre dois pontos é a raiz quadrada da soma dos quadrados das diferenças de suas coordenadas.
Em seguida, o problema pede o resto da divisão de uma potência grande por um número pequeno. Em vez de calcular a potência inteira, podemos observar o padrão dos restos. Os restos se repetem com um período curto, então só precisamos saber o expoente módulo esse período. Esse truque economiza muito trabalho e evita erros com números enormes.
Suponha que a sequência seja definida por uma regra simples em que cada termo é a soma dos dois termos anteriores. Podemos listar os primeiros termos à mão e procurar um padrão. Depois de um tempo o padrão fica claro, e podemos prová-lo por indução. O caso base é verdadeiro, e se a afirmação vale para um passo, então ela também vale para o passo seguinte.
Espere, preciso conferir de novo a conta anterior porque os números parecem grandes demais. Voltando ao começo, percebo que na segunda linha eu somei em vez de multiplicar. Corrigir esse erro muda o valor final, então vou refazer os passos restantes com a expressão certa. Sempre vale a pena verificar cada passo, principalmente quando a resposta parece suspeita.
A probabilidade de os dois eventos acontecerem é o produto de suas probabilidades individuais, desde que os eventos sejam independentes. Aqui a primeira retirada não afeta a segunda porque a bola é devolvida ao saco. Portanto a probabilidade é um terço vezes um terço, que dá um nono. Se a bola não fosse devolvida, teríamos que ajustar o segundo fator.
Para encontrar o máximo da função, calculamos a derivada e a igualamos a zero. A derivada é uma expressão linear, então existe exatamente um ponto crítico. Verificando a segunda derivada vemos que a função tem concavidade para baixo, o que significa que o ponto crítico é de fato um máximo. Substituindo de volta na função obtemos o maior valor possível.
Vamos contar os números inteiros entre um e mil que são divisíveis por três ou por cinco. Pelo princípio da inclusão e exclusão, somamos os múltiplos de três e os múltiplos de cinco e depois subtraímos os múltiplos de quinze, porque esses foram contados duas vezes. Assim obtemos uma resposta limpa sem precisar listar cada número.
A circunferência passa por três pontos dados, e queremos encontrar o seu raio. Uma abordagem é encontrar as mediatrizes de duas cordas e calcular onde elas se cruzam. Esse ponto de interseção é o centro da circunferência, e a distância do centro até qualquer um dos três pontos é o raio. Com uma conta cuidadosa o resultado é um número inteiro.
Outra ideia útil é trabalhar de trás para frente a partir do que queremos provar. Se precisamos mostrar que uma expressão é sempre positiva, podemos tentar escrevê-la como uma soma de quadrados. Quadrados nunca são negativos, e a soma só pode ser zero quando cada quadrado é zero. Isso muitas vezes leva a um argumento curto e elegante.
Por fim, juntamos todos os resultados parciais. A primeira parte nos deu vinte e cinco, a segunda parte nos deu uma quantidade de arranjos, e a geometria nos deu uma área de vinte e quatro. A questão pede a soma dessas quantidades, então somamos com cuidado e reduzimos o resultado módulo mil, como o problema exige. A resposta final é o número que obtemos depois desse último passo.
Olhando o problema de outro ângulo, podemos perguntar o que acontece quando o parâmetro fica muito grande. Nesse caso o termo dominante controla o comportamento de toda a expressão, e os termos menores se tornam desprezíveis. Esse tipo de estimativa é útil para conferir se uma resposta exata é razoável antes de aceitá-la.
Também precisamos garantir que todos os casos foram considerados. O número pode ser par ou ímpar, e os dois casos se comportam de forma diferente na divisão por dois. Para o caso par o argumento é direto, enquanto para o caso ímpar precisamos de um passo a mais. Depois de tratar os dois casos, a demonstração está completa e podemos afirmar o resultado com confiança.
)";

inline constexpr std::string_view kVietnamese = R"(
Trước tiên chúng ta đọc kỹ đề bài và viết ra những gì đã cho. Đề bài nói rằng tổng của hai số là bốn mươi và hiệu của chúng là mười, vì vậy ta gọi số lớn hơn là a và số nhỏ hơn là b. Cộng hai phương trình lại ta được hai lần a bằng năm mươi, nghĩa là a bằng hai mươi lăm và b bằng mười lăm. Trước khi tiếp tục, ta kiểm tra lại kết quả bằng cách thay cả hai giá trị vào các điều kiện ban đầu. Tổng đúng là bốn mươi và hiệu đúng là mười, vậy cặp số này là chính xác.
Bây giờ ta xét phần tiếp theo của câu hỏi, yêu cầu tìm số cách sắp xếp các chữ cái của một từ ngắn. Khi tất cả các chữ cái đều khác nhau, số cách chỉ đơn giản là giai thừa của độ dài từ đó. Tuy nhiên từ này có một chữ cái bị lặp lại, nên ta phải chia cho giai thừa của số lần lặp. Như vậy ta nhận được một số nhỏ hơn so với cách làm ngây thơ, và đó chính là đáp án ta cần tìm.
Hãy để tôi suy nghĩ kỹ hơn về phần hình học. Tam giác có một góc vuông tại đỉnh nơi hai cạnh ngắn hơn gặp nhau, vì vậy định lý Pythagoras được áp dụng trực tiếp. Bình phương của cạnh dài nhất bằng tổng bình phương của hai cạnh còn lại. Vì hai cạnh góc vuông dài sáu và tám, nên cạnh huyền phải bằng mười. Diện tích tam giác bằng một nửa tích hai cạnh góc vuông, tức là hai mươi bốn.
Chúng ta cũng nên nghĩ xem có cách nào đơn giản hơn để thấy điều này không. Đôi khi việc vẽ hình và đặt tên cho từng điểm sẽ giúp ích rất nhiều. Nếu ta đặt tam giác lên hệ trục tọa độ với góc vuông tại gốc tọa độ, phép tính trở nên gần như máy móc. Khoảng cách giữa hai điểm là căn bậc hai của tổng bình phương các hiệu tọa độ của chúng.
Tiếp theo, đề bài hỏi số dư khi chia một lũy thừa lớn cho một số nhỏ. Thay vì tính toàn bộ lũy thừa, ta có thể quan sát quy luật của các số dư. Các số dư lặp lại với một chu kỳ ngắn, nên ta chỉ cần biết số mũ theo modulo của chu kỳ đó. Mẹo này giúp tiết kiệm rất nhiều công sức và tránh sai sót khi làm việc với những số khổng lồ.
Giả sử dãy số được xác định bởi một quy tắc đơn giản, trong đó mỗi số hạng bằng tổng của hai số hạng đứng trước. Ta có thể liệt kê vài số hạng đầu tiên bằng tay và tìm quy luật. Sau một lúc quy luật trở nên rõ ràng, và ta có thể chứng minh nó bằng quy nạp. Trường hợp cơ sở đúng, và nếu mệnh đề đúng với một bước thì nó cũng đúng với bước tiếp theo.
Khoan đã, tôi cần kiểm tra lại phép tính trước đó vì các con số có vẻ quá lớn. Quay lại từ đầu, tôi nhận ra rằng ở dòng thứ hai tôi đã cộng thay vì nhân. Sửa lỗi đó sẽ làm thay đổi giá trị cuối cùng, nên tôi sẽ làm lại các bước còn lại với biểu thức đúng. Việc kiểm tra từng bước luôn đáng làm, nhất là khi đáp án trông có vẻ đáng ngờ.
Xác suất để cả hai biến cố cùng xảy ra bằng tích các xác suất riêng của chúng, với điều kiện hai biến cố độc lập. Ở đây lần rút thứ nhất không ảnh hưởng đến lần rút thứ hai vì quả bóng được bỏ lại vào túi. Do đó xác suất bằng một phần ba nhân một phần ba, tức là một phần chín. Nếu quả bóng không được bỏ lại, ta sẽ phải điều chỉnh thừa số thứ hai.
Để tìm giá trị lớn nhất của hàm số, ta lấy đạo hàm và cho nó bằng không. Đạo hàm là một biểu thức bậc nhất, nên có đúng một điểm tới hạn. Kiểm tra đạo hàm cấp hai cho thấy đồ thị hàm số lõm xuống, nghĩa là điểm tới hạn thực sự là điểm cực đại. Thay nó trở lại vào hàm số ta được giá trị lớn nhất có thể.
Hãy đếm các số nguyên từ một đến một nghìn chia hết cho ba hoặc cho năm. Theo nguyên lý bao hàm và loại trừ, ta cộng số các bội của ba với số các bội của năm rồi trừ đi số các bội của mười lăm, vì những số này đã được đếm hai lần. Cách này cho ta một đáp án gọn gàng mà không cần liệt kê từng số.
Đường tròn đi qua ba điểm cho trước, và ta muốn tìm bán kính của nó. Một cách làm là tìm đường trung trực của hai dây cung rồi tính giao điểm của chúng. Giao điểm đó chính là tâm đường tròn, và khoảng cách từ tâm đến bất kỳ điểm nào trong ba điểm là bán kính. Với phép tính cẩn thận, kết quả là một số nguyên.
Một ý tưởng hữu ích khác là suy luận ngược từ điều ta muốn chứng minh. Nếu cần chứng tỏ một biểu thức luôn dương, ta có thể thử viết nó thành tổng các bình phương. Bình phương không bao giờ âm, và tổng chỉ bằng không khi mọi bình phương đều bằng không. Điều này thường dẫn đến một lập luận ngắn gọn và đẹp.
Cuối cùng, ta tổng hợp tất cả các kết quả thành phần. Phần thứ nhất cho ta hai mươi lăm, phần thứ hai cho ta số cách sắp xếp, và phần hình học cho ta diện tích bằng hai mươi bốn. Câu hỏi yêu cầu tính tổng các đại lượng này, vì vậy ta cộng chúng lại cẩn thận và lấy kết quả theo modulo một nghìn như đề bài yêu cầu. Đáp án cuối cùng là con số ta thu được sau bước cuối này.
Nhìn bài toán từ một góc độ khác, ta có thể hỏi điều gì xảy ra khi tham số trở nên rất lớn. Khi đó số hạng chính sẽ quyết định dáng điệu của toàn bộ biểu thức, còn các số hạng nhỏ hơn trở nên không đáng kể. Kiểu ước lượng này rất có ích để kiểm tra xem một đáp án chính xác có hợp lý hay không trước khi ta chấp nhận nó.
Ta cũng cần chắc chắn rằng mọi trường hợp đều đã được xét. Số đó có thể chẵn hoặc lẻ, và hai trường hợp này có tính chất khác nhau khi chia cho hai. Với trường hợp chẵn lập luận rất trực tiếp, còn với trường hợp lẻ ta cần thêm một bước. Khi đã xử lý xong cả hai trường hợp, chứng minh hoàn tất và ta có thể khẳng định kết quả một cách chắc chắn.
)";

inline constexpr std::string_view kTagalog = R"(
Una, babasahin natin nang mabuti ang problema at isusulat kung ano ang ibinigay. Sinasabi na ang kabuuan ng dalawang numero ay apatnapu at ang kanilang pagkakaiba ay sampu, kaya tatawagin nating a ang mas malaking numero at b ang mas maliit na numero. Kapag pinagsama natin ang dalawang ekwasyon, makukuha natin na ang dalawang beses ng a ay limampu, ibig sabihin ang a ay dalawampu't lima at ang b ay labinlima. Bago tayo magpatuloy, suriin natin ang resulta sa pamamagitan ng paglalagay ng dalawang halaga sa orihinal na mga kondisyon. Ang kabuuan ay talagang apatnapu at ang pagkakaiba ay talagang sampu, kaya tama ang pares.
Ngayon ay tingnan natin ang susunod na bahagi ng tanong, na nagtatanong kung ilang paraan ang pag-aayos ng mga titik ng isang maikling salita. Kapag magkakaiba ang lahat ng titik, ang bilang ay ang factorial lamang ng haba ng salita. Ngunit may titik na umuulit sa salitang ito, kaya kailangan nating hatiin sa factorial ng bilang ng pag-uulit. Dahil dito ay mas maliit ang makukuha nating bilang kaysa sa iminumungkahi ng simpleng paraan, at iyon mismo ang sagot na hinahanap natin.
Pag-isipan ko nang mas mabuti ang bahaging heometriya. May tamang anggulo ang tatsulok sa sulok kung saan nagtatagpo ang dalawang mas maikling gilid, kaya direktang magagamit ang teorema ni Pythagoras. Ang parisukat ng pinakamahabang gilid ay katumbas ng kabuuan ng mga parisukat ng dalawang iba pang gilid. Dahil anim at walo ang haba ng mga binti, sampu dapat ang hypotenuse. Ang lawak ng tatsulok ay kalahati ng produkto ng mga binti, na dalawampu't apat.
Dapat din nating isipin kung may mas simpleng paraan upang makita ito. Minsan nakakatulong ang pagguhit ng larawan at paglalagay ng pangalan sa bawat punto. Kung ilalagay natin ang tatsulok sa isang coordinate plane na nasa pinagmulan ang tamang anggulo, halos mekanikal na ang pagkalkula. Ang distansya sa pagitan ng dalawang punto ay ang square root ng kabuuan ng mga parisukat ng pagkakaiba ng kanilang mga coordinate.
Susunod, tinatanong ng problema ang natitira kapag hinati ang isang malaking kapangyarihan sa isang maliit na numero. Sa halip na kalkulahin ang buong kapangyarihan, maaari nating tingnan ang padron ng mga natitira. Umuulit ang mga natitira sa isang maikling panahon, kaya kailangan lang nating malaman ang exponent modulo ng panahong iyon. Nakakatipid ng maraming trabaho ang paraang ito at naiiwasan ang mga pagkakamali sa napakalalaking numero.
Ipagpalagay na ang pagkakasunod-sunod ay tinutukoy ng isang simpleng tuntunin kung saan ang bawat termino ay ang kabuuan ng dalawang naunang termino. Maaari nating isulat nang mano-mano ang unang ilang termino at maghanap ng padron. Pagkaraan ng ilang sandali ay nagiging malinaw ang padron, at mapapatunayan natin ito sa pamamagitan ng induksyon. Totoo ang batayang kaso, at kung totoo ang pahayag para sa isang hakbang, totoo rin ito para sa kasunod na hakbang.
Sandali, kailangan kong suriin muli ang naunang pagkalkula dahil mukhang masyadong malalaki ang mga numero. Pagbalik ko sa simula, napansin kong nagdagdag ako sa halip na magparami sa ikalawang linya. Ang pagwawasto sa pagkakamaling iyon ay nagbabago sa huling halaga, kaya uulitin ko ang natitirang mga hakbang gamit ang tamang ekspresyon. Laging sulit na suriin ang bawat hakbang, lalo na kapag mukhang kahina-hinala ang sagot.
Ang posibilidad na mangyari ang dalawang pangyayari ay ang produkto ng kani-kanilang posibilidad, basta't hindi nakadepende ang mga pangyayari sa isa't isa. Dito ay hindi naaapektuhan ng unang pagbunot ang ikalawang pagbunot dahil ibinabalik ang bola sa supot. Kaya ang posibilidad ay isang katlo na pinarami sa isang katlo, na katumbas ng isang kasiyam. Kung hindi ibinalik ang bola, kailangan nating baguhin ang ikalawang salik.
Upang mahanap ang pinakamataas na halaga ng punsyon, kinukuha natin ang derivative at itinatakda itong katumbas ng sero. Isang linyar na ekspresyon ang derivative, kaya may eksaktong isang kritikal na punto. Ipinapakita ng ikalawang derivative na pababa ang kurba ng punsyon, kaya ang kritikal na punto ay talagang pinakamataas. Kapag ibinalik natin ito sa punsyon, makukuha natin ang pinakamalaking posibleng halaga.
Bilangin natin ang mga buumbilang mula isa hanggang isang libo na nahahati sa tatlo o sa lima. Ayon sa prinsipyo ng pagsasama at pagbubukod, idinadagdag natin ang mga multiple ng tatlo at ang mga multiple ng lima at saka ibinabawas ang mga multiple ng labinlima, dahil dalawang beses silang nabilang. Sa ganitong paraan ay nakakakuha tayo ng malinis na sagot nang hindi isinusulat ang bawat numero.
Dumaraan ang bilog sa tatlong ibinigay na punto, at gusto nating hanapin ang radius nito. Isang paraan ay hanapin ang mga perpendikular na bisector ng dalawang kuwerdas at kalkulahin kung saan sila nagsasalubong. Ang puntong iyon ang sentro ng bilog, at ang distansya mula sa sentro hanggang sa alinman sa tatlong punto ay ang radius. Sa maingat na pagkalkula, buong numero ang lumalabas na sagot.
Isa pang kapaki-pakinabang na ideya ay magsimula sa dulo, mula sa gusto nating patunayan. Kung kailangan nating ipakita na laging positibo ang isang ekspresyon, maaari nating subukang isulat ito bilang kabuuan ng mga parisukat. Hindi kailanman negatibo ang mga parisukat, at magiging sero lamang ang kabuuan kapag sero ang bawat parisukat. Madalas itong humahantong sa isang maikli at magandang pangangatwiran.
Sa wakas, pagsasamahin natin ang lahat ng bahagyang resulta. Dalawampu't lima ang ibinigay ng unang bahagi, isang bilang ng mga pag-aayos ang ibinigay ng ikalawang bahagi, at dalawampu't apat na lawak ang ibinigay ng heometriya. Hinihingi ng tanong ang kabuuan ng mga dami na ito, kaya maingat natin silang pagsasamahin at kukunin ang resulta modulo isang libo ayon sa hinihingi ng problema. Ang huling sagot ay ang numerong makukuha natin pagkatapos ng huling hakbang na ito.
Kung titingnan natin ang problema mula sa ibang anggulo, maaari nating itanong kung ano ang mangyayari kapag naging napakalaki ng parameter. Sa ganoong kaso, ang nangingibabaw na termino ang kumokontrol sa pag-uugali ng buong ekspresyon, at nagiging hindi na mahalaga ang mas maliliit na termino. Kapaki-pakinabang ang ganitong pagtatantya upang masuri kung makatwiran ang isang eksaktong sagot bago natin ito tanggapin.
Kailangan din nating tiyakin na nasaklaw ang bawat kaso. Maaaring even o odd ang numero, at magkaiba ang pag-uugali ng dalawang kaso kapag hinati sa dalawa. Sa kasong even ay tuwiran ang pangangatwiran, samantalang sa kasong odd ay kailangan natin ng isa pang hakbang. Kapag naasikaso na ang dalawang kaso, kumpleto na ang patunay at masasabi natin ang resulta nang may kumpiyansa.
)";

}  // namespace mlscale::seed
