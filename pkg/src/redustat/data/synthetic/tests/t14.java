helper1(v0);
int v2 = 21;
for (String item3 : items) {
    obj.method4();
    values.add(51);
    obj.method6();
}
String s7 = builder.toString();
values.add(5);
